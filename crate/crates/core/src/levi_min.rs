//! Minimal Levi subgroups for a given kernel, duality of isogeny types, and
//! kernels of `h_L` for standard Levi subgroups.
//!
//! The ranks in [`table_rank`] are a transcription of the known
//! classification for simple simply connected groups. [`LeviKernels`]
//! recomputes the same data from the coweight lattice and is used to check
//! the transcription and by the direct Borel count.

use serde::{Deserialize, Serialize};

use crate::center_lattice::{
    fundamental_group, subgroup_lattice, FundGroup, FundShape, GroupSpec, Isogeny, Lattice, Subgroup,
};
use crate::error::{Error, Result};
use crate::root_system::{self, Series};

/// Data attached to the minimal Levi subgroups for a kernel `K`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeviDatum {
    /// Semisimple rank shared by every member of the minimal family.
    pub ss_rank: usize,
    /// Shape of `Z(L)/Z(L)°`, isomorphic to `Fund / K`.
    pub center_components: FundShape,
    pub kernel: Subgroup,
    pub kernel_label: String,
    /// Size of a minimal simple-root subset `I_K`; equals `ss_rank`.
    pub i_k_size: usize,
}

/// Tabulated semisimple rank of `L` in the minimal family for `K`.
pub fn table_rank(fund: &FundGroup, k: Subgroup) -> Result<usize> {
    if !k.is_subgroup_of(fund.full()) {
        return Err(Error::UnknownKernel(format!("mask {:#b}", k.mask())));
    }
    if k == fund.full() {
        return Ok(0);
    }
    let n = fund.rank;
    let order = fund.order() as usize;
    let unknown = || Error::UnknownKernel(format!("{} in {}{}", fund.label(k), fund.series, n));
    let trivial = k.order() == 1;
    Ok(match fund.series {
        Series::A => order - k.order() as usize,
        Series::B if trivial => (n + 1) / 2,
        Series::C if trivial => 1,
        Series::D if n % 2 == 1 => {
            let m = (n - 1) / 2;
            match k.order() {
                1 => m + 2,
                2 => 2,
                _ => return Err(unknown()),
            }
        }
        Series::D => {
            let m = n / 2;
            match k.mask() {
                0b0001 => m + 1,
                0b0011 | 0b0101 => m,
                0b1001 => 2,
                _ => return Err(unknown()),
            }
        }
        Series::E6 if trivial => 4,
        Series::E7 if trivial => 3,
        _ => return Err(unknown()),
    })
}

pub fn lmin_rank(series: Series, rank: usize, k: Subgroup) -> Result<LeviDatum> {
    let fund = fundamental_group(series, rank)?;
    let ss_rank = table_rank(&fund, k)?;
    let quotient = fund.order() / k.order();
    let center_components = if fund.shape == FundShape::Klein && quotient == 4 {
        FundShape::Klein
    } else {
        FundShape::Cyclic(quotient)
    };
    Ok(LeviDatum {
        ss_rank,
        center_components,
        kernel: k,
        kernel_label: fund.label(k),
        i_k_size: ss_rank,
    })
}

/// How a linear character of `H^1(F, Z(G))` is specified.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Character {
    /// By its order; enough when the center is cyclic.
    Order(u32),
    /// By its kernel, pulled back to the fundamental group.
    Kernel(Subgroup),
}

/// The cuspidal Levi attached to a character of `Z(G)`, via the kernel of
/// the character pulled back to the simply connected cover.
pub fn cuspidal_levi_for_character(spec: &GroupSpec, zeta: Character) -> Result<LeviDatum> {
    let fund = spec.fund();
    let kg = spec.kernel();
    let quotient = fund.order() / kg.order();
    let kernel = match zeta {
        Character::Order(o) => {
            if o == 0 || quotient % o != 0 {
                return Err(Error::UnknownKernel(format!(
                    "no character of order {o} on a center of order {quotient}"
                )));
            }
            if o == 1 {
                fund.full()
            } else if fund.is_cyclic() {
                fund.cyclic_subgroup(fund.order() / o).expect("divisor")
            } else if quotient == 2 {
                kg
            } else {
                return Err(Error::UnknownKernel(
                    "characters of μ2×μ2 must be given by their kernel".into(),
                ));
            }
        }
        Character::Kernel(k) => {
            let cyclic_quotient = fund.is_cyclic() || k.order() > 1;
            if !kg.is_subgroup_of(k) || !cyclic_quotient {
                return Err(Error::UnknownKernel(format!(
                    "{} is not the kernel of a character of Z(G)",
                    fund.label(k)
                )));
            }
            k
        }
    };
    lmin_rank(spec.series, spec.rank, kernel)
}

/// The dual group datum.
pub fn dual_spec(spec: &GroupSpec) -> Result<GroupSpec> {
    let n = spec.rank;
    let (series, isogeny) = match (&spec.isogeny, spec.series) {
        (Isogeny::ConnectedCenter { .. }, _) => (spec.series, spec.isogeny.clone()),
        (Isogeny::Quotient(r), Series::A) => (Series::A, Isogeny::Quotient((n as u32 + 1) / r)),
        (Isogeny::SimplyConnected, Series::B) => (Series::C, Isogeny::Adjoint),
        (Isogeny::Adjoint, Series::B) => (Series::C, Isogeny::SimplyConnected),
        (Isogeny::SimplyConnected, Series::C) => (Series::B, Isogeny::Adjoint),
        (Isogeny::Adjoint, Series::C) => (Series::B, Isogeny::SimplyConnected),
        (Isogeny::SimplyConnected, s) if fundamental_group(s, n)?.order() > 1 => (s, Isogeny::Adjoint),
        (Isogeny::Adjoint, s) => (s, Isogeny::SimplyConnected),
        (i, s) => (s, i.clone()),
    };
    let mut dual = GroupSpec::new(series, n, isogeny, spec.twist)?;
    dual.q = spec.q;
    Ok(dual)
}

/// `ker(h_{L_J})` for every subset `J` of simple roots (as a bitmask).
#[derive(Clone, Debug)]
pub struct LeviKernels {
    pub fund: FundGroup,
    pub kernels: Vec<Subgroup>,
}

impl LeviKernels {
    pub fn compute(series: Series, rank: usize) -> Result<Self> {
        let fund = fundamental_group(series, rank)?;
        let cartan = root_system::cartan_matrix(series, rank)?;
        let n = rank;
        let coweights: Vec<Vec<i64>> = (0..fund.order()).map(|e| fund.coweight(e)).collect();
        let kernels = (0..1u32 << n)
            .map(|j| {
                let mut gens = cartan.clone();
                for i in (0..n).filter(|i| j >> i & 1 == 0) {
                    let mut v = vec![0; n];
                    v[i] = 1;
                    gens.push(v);
                }
                let lat = Lattice::new(gens, n);
                let mask = coweights
                    .iter()
                    .enumerate()
                    .filter(|(_, w)| lat.contains(w))
                    .fold(0u32, |m, (e, _)| m | 1 << e);
                Subgroup::from_mask(mask)
            })
            .collect();
        Ok(LeviKernels { fund, kernels })
    }

    pub fn kernel(&self, subset: u32) -> Subgroup {
        self.kernels[subset as usize]
    }

    /// Inclusion-minimal subsets `J` with `ker(h_{L_J}) ⊆ k`, optionally
    /// restricted to unions of the given orbits.
    pub fn minimal_subsets(&self, k: Subgroup, orbits: Option<&[Vec<usize>]>) -> Vec<u32> {
        let admissible = |j: u32| match orbits {
            None => true,
            Some(os) => os.iter().all(|o| {
                let bits: Vec<bool> = o.iter().map(|&i| j >> i & 1 == 1).collect();
                bits.iter().all(|&b| b) || bits.iter().all(|&b| !b)
            }),
        };
        let hits: Vec<u32> = (0..self.kernels.len() as u32)
            .filter(|&j| admissible(j) && self.kernels[j as usize].is_subgroup_of(k))
            .collect();
        hits.iter()
            .copied()
            .filter(|&j| !hits.iter().any(|&i| i != j && i & j == i))
            .collect()
    }

    /// Ranks of the inclusion-minimal subsets for every subgroup.
    pub fn minimal_ranks(&self) -> Vec<(Subgroup, Vec<usize>)> {
        subgroup_lattice(&self.fund)
            .subgroups
            .into_iter()
            .map(|k| {
                let mut ranks: Vec<usize> = self
                    .minimal_subsets(k, None)
                    .into_iter()
                    .map(|j| j.count_ones() as usize)
                    .collect();
                ranks.sort_unstable();
                ranks.dedup();
                (k, ranks)
            })
            .collect()
    }
}

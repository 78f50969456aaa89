//! Counting formulas in `q`: semisimple classes, semisimple characters,
//! `p'`-characters of a Borel subgroup, Gelfand-Graev inner products, and the
//! McKay comparison built on them.
//!
//! Every result is a [`CondPoly`] over the residues of `q` modulo the
//! modulus of the fundamental group. Residues that no prime power reaches are
//! left out of the domain. Bad primes are not removed from symbolic results;
//! they are refused at evaluation time and dropped by [`mckay_verify`].

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::arith;
use crate::center_lattice::{
    self, check_q, connected_center_order, lang_preimage, subgroup_lattice, FundGroup, FundShape, GroupSpec,
    Isogeny, Subgroup,
};
use crate::error::{Error, Result};
use crate::levi_min::{dual_spec, table_rank, LeviKernels};
use crate::qpoly::{CondPoly, Poly};
use crate::root_system::{self, Series, Twist};

mod report;
pub mod tables;

pub use report::{CountReport, Kind, McKayReport, RelativeCheck, Route, Verdict};

/// Builds a count over the realizable residues for the group's twist.
pub(crate) fn over_residues(spec: &GroupSpec, mut f: impl FnMut(u64) -> Result<Option<Poly>>) -> Result<CondPoly> {
    let m = spec.fund().modulus();
    CondPoly::try_build(m, &[spec.twist], |r, _| {
        if arith::realizable_residue(r, m) {
            f(r)
        } else {
            Ok(None)
        }
    })
}

/// True when some prime power `q ≡ residue (mod modulus)` has good
/// characteristic for the type.
pub fn good_residue(series: Series, rank: usize, residue: u64, modulus: u64) -> Result<bool> {
    if !arith::realizable_residue(residue, modulus) {
        return Ok(false);
    }
    let g = arith::gcd(residue % modulus, modulus);
    match arith::prime_power(g) {
        Some((p, _)) => root_system::is_good_prime(series, rank, p),
        None => Ok(true),
    }
}

/// Restricts a count to residues compatible with a good characteristic.
pub fn restrict_to_good(spec: &GroupSpec, c: &CondPoly) -> Result<CondPoly> {
    let m = c.modulus();
    let mut keep = BTreeMap::new();
    for r in 0..m {
        keep.insert(r, good_residue(spec.series, spec.rank, r, m)?);
    }
    Ok(c.filter(|r, _| keep[&r]))
}

/// Human-readable hypotheses attached to a result.
pub fn side_conditions(spec: &GroupSpec) -> Vec<String> {
    let mut out = Vec::new();
    if let Ok(bad) = root_system::bad_primes(spec.series, spec.rank) {
        if !bad.is_empty() {
            let list: Vec<String> = bad.iter().map(u64::to_string).collect();
            out.push(format!("p good: p ∉ {{{}}}", list.join(", ")));
        }
    }
    if spec.fund().shape == FundShape::Klein && spec.twist == Twist::NonSplit {
        out.push("twisted D_{2m}: H^1(F, Z(G)) taken to be the full component group for odd q".into());
    }
    if let Isogeny::ConnectedCenter { center_order } = &spec.isogeny {
        out.push(format!("|Z(G)^F| = {center_order} supplied by the caller"));
    }
    out
}

/// `q^(l - r)`, the weight of a cuspidal Levi of semisimple rank `r`.
fn levi_weight(l: usize, r: usize) -> Poly {
    debug_assert!(r <= l);
    Poly::q_pow((l - r) as u32)
}

/// Sum of `chi(x)` over the characters of `Fund` whose kernel is exactly `k`.
fn kernel_character_sum(fund: &FundGroup, k: Subgroup, x: u32) -> i64 {
    let lattice = subgroup_lattice(fund);
    lattice
        .subgroups
        .iter()
        .filter(|&&big| k.is_subgroup_of(big) && big.contains(x))
        .map(|&big| lattice.mobius(k, big) * (fund.order() / big.order()) as i64)
        .sum()
}

/// `<Gamma_z1, Gamma_z2>` on the residue `r`, without the `|Z°^F|` factor.
fn gg_inner_at(spec: &GroupSpec, x: u32, r: u64) -> Result<Poly> {
    let fund = spec.fund();
    let preimage = lang_preimage(spec, r);
    let mut total = Poly::zero();
    for k in subgroup_lattice(&fund).subgroups {
        if !preimage.is_subgroup_of(k) {
            continue;
        }
        let c = kernel_character_sum(&fund, k, x);
        if c != 0 {
            let rank = table_rank(&fund, k)?;
            total = &total + &levi_weight(spec.rank, rank).scale(&BigRational::from_integer(c.into()));
        }
    }
    Ok(total)
}

/// Inner product of the Gelfand-Graev characters labelled `z1` and `z2`.
///
/// Labels are elements of the fundamental group and are read modulo the
/// Lang preimage on each branch, so `0..|H^1|` are the distinct labels of a
/// branch.
pub fn gg_inner_product(spec: &GroupSpec, z1: u32, z2: u32) -> Result<CondPoly> {
    let fund = spec.fund();
    for z in [z1, z2] {
        if z >= fund.order() {
            return Err(Error::InvalidLabel { label: z, order: fund.order() });
        }
    }
    let x = fund.sub(z2, z1);
    let scale = connected_center_order(spec);
    over_residues(spec, |r| Ok(Some(&gg_inner_at(spec, x, r)? * &scale)))
}

/// Number of semisimple classes, via characters of `H^1` on the dual side.
pub fn semisimple_class_count(spec: &GroupSpec) -> Result<CondPoly> {
    gg_inner_product(&dual_spec(spec)?, 0, 0)
}

/// `|T|`, `|T_1|` and `|T_ℓ|` on every branch where `|H^1|` is 1 or prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TdCounts {
    /// `ℓ = |H^1(F, Z(G))|`.
    pub ell: CondPoly,
    pub total: CondPoly,
    pub one: CondPoly,
    /// Zero on branches with trivial `H^1`.
    pub ell_part: CondPoly,
    /// Number of semisimple classes of the dual, `|T_1| + ℓ |T_ℓ|`.
    pub classes: CondPoly,
}

/// `(ℓ, |T|, |S|)` per residue where `ℓ` is 1 or prime.
fn prime_h1_cells(spec: &GroupSpec) -> Result<Vec<(u64, u64, Poly, Poly)>> {
    let fund = spec.fund();
    let m = fund.modulus();
    let scale = connected_center_order(spec);
    let total = &Poly::q_pow(spec.rank as u32) * &scale;
    let mut out = Vec::new();
    let mut composite = None;
    for r in (0..m).filter(|&r| arith::realizable_residue(r, m)) {
        let ell = center_lattice::h1_order_at_residue(spec, r);
        if ell != 1 && !arith::is_prime(ell) {
            composite = Some(ell);
            continue;
        }
        let classes = &gg_inner_at(spec, 0, r)? * &scale;
        out.push((r, ell, total.clone(), classes));
    }
    if out.is_empty() {
        return Err(Error::CompositeH1 { order: composite.unwrap_or(0) });
    }
    Ok(out)
}

fn from_cells(spec: &GroupSpec, cells: &[(u64, Poly)]) -> CondPoly {
    let map: BTreeMap<u64, &Poly> = cells.iter().map(|(r, p)| (*r, p)).collect();
    CondPoly::build(spec.fund().modulus(), &[spec.twist], |r, _| map.get(&r).map(|p| (*p).clone()))
}

pub fn td_counts(spec: &GroupSpec) -> Result<TdCounts> {
    let cells = prime_h1_cells(spec)?;
    let mut ell = Vec::new();
    let mut total = Vec::new();
    let mut one = Vec::new();
    let mut ell_part = Vec::new();
    let mut classes = Vec::new();
    for (r, l, t, s) in cells {
        let (t1, tl) = if l == 1 {
            (t.clone(), Poly::zero())
        } else {
            let li = l as i64;
            let inv = BigRational::new(1.into(), (li - 1).into());
            let t1 = (&t.scale(&BigRational::from_integer(li.into())) - &s).scale(&inv);
            let tl = (&s - &t).scale(&inv);
            (t1, tl)
        };
        ell.push((r, Poly::constant(l as i64)));
        total.push((r, t));
        one.push((r, t1));
        ell_part.push((r, tl));
        classes.push((r, s));
    }
    Ok(TdCounts {
        ell: from_cells(spec, &ell),
        total: from_cells(spec, &total),
        one: from_cells(spec, &one),
        ell_part: from_cells(spec, &ell_part),
        classes: from_cells(spec, &classes),
    })
}

/// Number of semisimple characters, `Σ d^2 |T_d|`, on branches where
/// `|H^1|` is trivial or prime.
pub fn semisimple_char_count(spec: &GroupSpec) -> Result<CondPoly> {
    let cells: Vec<(u64, Poly)> = prime_h1_cells(spec)?
        .into_iter()
        .map(|(r, l, t, s)| {
            let l = BigRational::from_integer((l as i64).into());
            let one = BigRational::from_integer(1.into());
            (r, &s.scale(&(&l + &one)) - &t.scale(&l))
        })
        .collect();
    Ok(from_cells(spec, &cells))
}

/// `Π (q^{|ω|} - 1)` over the orbits outside `subset` (a bitmask of orbits).
fn outside_weight(orbits: &[Vec<usize>], subset: u32) -> Poly {
    orbits
        .iter()
        .enumerate()
        .filter(|(i, _)| subset >> i & 1 == 0)
        .fold(Poly::one(), |acc, (_, o)| &acc * &(&Poly::q_pow(o.len() as u32) - &Poly::one()))
}

/// For each `E = ker(h_{L_{m(J)}}) ∨ K_G`, the sum of the weights of the
/// `F`-stable `J` with that kernel.
fn borel_weights_by_kernel(spec: &GroupSpec) -> Result<BTreeMap<Subgroup, Poly>> {
    let fund = spec.fund();
    let kernels = LeviKernels::compute(spec.series, spec.rank)?;
    let orbits = root_system::frobenius_orbits(spec.series, spec.rank, spec.twist)?.orbits;
    let kg = spec.kernel();
    let mut by_kernel: BTreeMap<Subgroup, Poly> = BTreeMap::new();
    for j in 0..1u32 << orbits.len() {
        let roots = orbits
            .iter()
            .enumerate()
            .filter(|(i, _)| j >> i & 1 == 1)
            .flat_map(|(_, o)| o.iter())
            .fold(0u32, |m, &i| m | 1 << i);
        let e = fund.join(kernels.kernel(roots), kg);
        let w = outside_weight(&orbits, j);
        let slot = by_kernel.entry(e).or_insert_with(Poly::zero);
        *slot = &*slot + &w;
    }
    Ok(by_kernel)
}

/// `|Irr_{p'}(B^F)|` summed over `F`-stable sets of orbits `J`, weighting each
/// by `|Z(L_{m(J)})^F|^2`.
pub fn borel_pprime_count(spec: &GroupSpec) -> Result<CondPoly> {
    let fund = spec.fund();
    let weights = borel_weights_by_kernel(spec)?;
    let scale = connected_center_order(spec);
    over_residues(spec, |r| {
        let sum: Poly = weights
            .iter()
            .map(|(&e, w)| {
                let f = fund.fixed_quotient_order(e, spec.twist, r) as i64;
                w.scale(&BigRational::from_integer((f * f).into()))
            })
            .sum();
        Ok(Some(&sum * &scale))
    })
}

/// Subgroups containing the isogeny kernel, refusing those the non-split
/// Frobenius moves (the half-spin kernels of twisted `D_{2m}`).
fn stable_overgroups(spec: &GroupSpec) -> Result<Vec<Subgroup>> {
    let fund = spec.fund();
    let kg = spec.kernel();
    let subs: Vec<Subgroup> = subgroup_lattice(&fund)
        .subgroups
        .into_iter()
        .filter(|&e| kg.is_subgroup_of(e))
        .collect();
    if fund.shape == FundShape::Klein && spec.twist == Twist::NonSplit {
        if let Some(&e) = subs.iter().find(|e| matches!(e.mask(), 0b0011 | 0b0101)) {
            return Err(Error::UnsupportedTwist {
                context: spec.name(),
                reason: format!(
                    "the minimal Levi for {} is not stable under the non-split Frobenius",
                    fund.label(e)
                ),
            });
        }
    }
    Ok(subs)
}

/// Borel count grouped by kernels, with Möbius inversion over the lattice
/// of subgroups containing `K_G`.
pub fn borel_pprime_lattice(spec: &GroupSpec) -> Result<CondPoly> {
    let fund = spec.fund();
    let lattice = subgroup_lattice(&fund);
    let subs = stable_overgroups(spec)?;
    let mut exact: Vec<(Subgroup, Poly)> = Vec::new();
    for &e in &subs {
        let mut p = Poly::zero();
        for &below in subs.iter().filter(|b| b.is_subgroup_of(e)) {
            let mu = lattice.mobius(below, e);
            if mu != 0 {
                let w = levi_weight(spec.rank, table_rank(&fund, below)?);
                p = &p + &w.scale(&BigRational::from_integer(mu.into()));
            }
        }
        exact.push((e, p));
    }
    let scale = connected_center_order(spec);
    over_residues(spec, |r| {
        let sum: Poly = exact
            .iter()
            .map(|(e, p)| {
                let f = fund.fixed_quotient_order(*e, spec.twist, r) as i64;
                p.scale(&BigRational::from_integer((f * f).into()))
            })
            .sum();
        Ok(Some(&sum * &scale))
    })
}

/// The same grouping, but removing only the maximal proper subgroups of
/// each kernel instead of inverting over the whole lattice. This agrees
/// with [`borel_pprime_lattice`] when the subgroups form a chain and
/// undercounts otherwise. Defined only on branches where Frobenius fixes
/// the whole component group, so that kernels range over all of it.
pub fn borel_maximal_subtraction(spec: &GroupSpec) -> Result<CondPoly> {
    let fund = spec.fund();
    let subs = stable_overgroups(spec)?;
    let lattice = subgroup_lattice(&fund);
    let mut exact: Vec<(Subgroup, Poly)> = Vec::new();
    for &e in &subs {
        let idx = lattice.index_of(e).expect("subgroup in lattice");
        let mut p = levi_weight(spec.rank, table_rank(&fund, e)?);
        for &i in &lattice.maximal[idx] {
            let below = lattice.subgroups[i];
            if subs.contains(&below) {
                p = &p - &levi_weight(spec.rank, table_rank(&fund, below)?);
            }
        }
        exact.push((e, p));
    }
    let scale = connected_center_order(spec);
    over_residues(spec, |r| {
        if lang_preimage(spec, r) != spec.kernel() {
            return Ok(None);
        }
        let sum: Poly = exact
            .iter()
            .map(|(e, p)| {
                let f = fund.fixed_quotient_order(*e, spec.twist, r) as i64;
                p.scale(&BigRational::from_integer((f * f).into()))
            })
            .sum();
        Ok(Some(&sum * &scale))
    })
}

/// `|Z°^F| (q^l + (ℓ^2 - 1) q^{l - r})` on branches where `ℓ = |H^1|` is
/// trivial or prime, `r` being the rank of the minimal Levi for the Lang
/// preimage.
pub fn borel_prime_closed_form(spec: &GroupSpec) -> Result<CondPoly> {
    let fund = spec.fund();
    let scale = connected_center_order(spec);
    let mut any = false;
    let out = over_residues(spec, |r| {
        let ell = center_lattice::h1_order_at_residue(spec, r) as i64;
        if ell != 1 && !arith::is_prime(ell as u64) {
            return Ok(None);
        }
        any = true;
        let rank = table_rank(&fund, lang_preimage(spec, r))?;
        let extra = levi_weight(spec.rank, rank).scale(&BigRational::from_integer((ell * ell - 1).into()));
        Ok(Some(&(&Poly::q_pow(spec.rank as u32) + &extra) * &scale))
    })?;
    if !any {
        return Err(Error::CompositeH1 { order: fund.order() as u64 });
    }
    Ok(out)
}

/// Closed Borel count for simply connected `D_{2n}`, odd `q`:
/// `q^{2n} + 3q^{2n-2} + 6q^n + 6q^{n-1}`.
pub fn borel_d_even(n: u32) -> Poly {
    &(&(&Poly::q_pow(2 * n) + &Poly::monomial(3, 2 * n - 2)) + &Poly::monomial(6, n)) + &Poly::monomial(6, n - 1)
}

/// The printed variant of [`borel_d_even`], with `4q^{n-1}` as last term.
/// It comes from subtracting only maximal proper subgroups in the Klein
/// lattice, see [`borel_maximal_subtraction`].
pub fn borel_d_even_printed(n: u32) -> Poly {
    &(&(&Poly::q_pow(2 * n) + &Poly::monomial(3, 2 * n - 2)) + &Poly::monomial(6, n)) + &Poly::monomial(4, n - 1)
}

/// Closed Borel count for simply connected `D_{2n+1}` when `|H^1| = 4`:
/// `q^{2n+1} + 3q^{2n-1} + 12q^{n-1}`.
pub fn borel_d_odd(n: u32) -> Poly {
    &(&Poly::q_pow(2 * n + 1) + &Poly::monomial(3, 2 * n - 1)) + &Poly::monomial(12, n - 1)
}

/// `|Z(G^F)|` as a count: `|H^1|` for semisimple groups, the supplied
/// center order for connected-center companions.
pub fn center_order(spec: &GroupSpec) -> CondPoly {
    center_lattice::center_fixed_orders(spec).0
}

fn divide_by_center(spec: &GroupSpec, c: &CondPoly, nu: u32) -> Result<CondPoly> {
    let fund = spec.fund();
    if !spec.isogeny.is_connected_center() && nu >= fund.order() {
        return Err(Error::NotCentralCharacter(format!(
            "label {nu} for a center of order dividing {}",
            fund.order()
        )));
    }
    let z = center_order(spec);
    let m = arith::lcm(c.modulus(), z.modulus());
    let (c, z) = (c.refine(m), z.refine(m));
    let out = CondPoly::try_build(m, &[spec.twist], |r, t| {
        let (Some(a), Some(b)) = (c.cells().get(&(t, r)), z.cells().get(&(t, r))) else {
            return Ok(None);
        };
        let quotient = a.div_exact(b).ok_or_else(|| Error::NonInteger(format!("({a}) / ({b})")))?;
        if !quotient.integer_valued_on(r, m) {
            return Err(Error::NonInteger(format!("{quotient} on q ≡ {r} mod {m}")));
        }
        Ok(Some(quotient))
    })?;
    Ok(out)
}

/// Semisimple characters lying over one central character `nu`:
/// `|Irr_s(G^F)| / |Z(G^F)|`, independent of `nu`.
pub fn relative_count(spec: &GroupSpec, nu: u32) -> Result<CondPoly> {
    divide_by_center(spec, &semisimple_char_count(spec)?, nu)
}

/// Borel-side counterpart of [`relative_count`].
pub fn borel_relative_count(spec: &GroupSpec, nu: u32) -> Result<CondPoly> {
    divide_by_center(spec, &borel_pprime_count(spec)?, nu)
}

/// Evaluates a count at `q` after checking `q` is a prime power in good
/// characteristic.
pub fn evaluate(spec: &GroupSpec, count: &CondPoly, q: u64) -> Result<BigInt> {
    check_q(spec, q)?;
    count.evaluate(q, spec.twist)
}

/// Compares the semisimple character count with the Borel count on every
/// branch where `p` is good and `|H^1|` is trivial or prime.
pub fn mckay_verify(spec: &GroupSpec) -> Result<McKayReport> {
    let out_of_scope = |reason: String| McKayReport {
        spec: spec.clone(),
        verdict: Verdict::OutOfScope,
        g_side: None,
        b_side: None,
        witness: None,
        relative: None,
        reason: Some(reason),
    };
    let g = match semisimple_char_count(spec) {
        Ok(g) => restrict_to_good(spec, &g)?,
        Err(e) if e.is_refusal() => return Ok(out_of_scope(e.to_string())),
        Err(e) => return Err(e),
    };
    if g.is_empty() {
        return Ok(out_of_scope(
            "no branch with p good and |H^1(F, Z(G))| trivial or prime".into(),
        ));
    }
    let b = match borel_pprime_lattice(spec) {
        Ok(b) => b.intersect_domain(&g),
        Err(e) if e.is_refusal() => return Ok(out_of_scope(e.to_string())),
        Err(e) => return Err(e),
    };
    let witness = g.equal(&b).err();
    let rel_g = relative_count(spec, 0)?.intersect_domain(&g);
    let rel_b = divide_by_center(spec, &b, 0)?;
    let rel_witness = rel_g.equal(&rel_b).err();
    let relative = RelativeCheck {
        equal: rel_witness.is_none(),
        g_side: rel_g,
        b_side: rel_b,
        witness: rel_witness,
    };
    let verdict = if witness.is_none() && relative.equal { Verdict::Equal } else { Verdict::Mismatch };
    Ok(McKayReport {
        spec: spec.clone(),
        verdict,
        g_side: Some(g),
        b_side: Some(b),
        witness,
        relative: Some(relative),
        reason: None,
    })
}

/// Every spec in the supported grid up to `max_rank`: all isogeny types
/// and twists, one connected-center companion per rank in type `A`.
pub fn spec_grid(max_rank: usize) -> Vec<GroupSpec> {
    let mut out = Vec::new();
    for series in Series::ALL {
        for rank in series.ranks_up_to(max_rank) {
            for twist in Twist::BOTH {
                if root_system::frobenius_orbits(series, rank, twist).is_err() {
                    continue;
                }
                let fund = match center_lattice::fundamental_group(series, rank) {
                    Ok(f) => f,
                    Err(_) => continue,
                };
                let mut isogenies = vec![Isogeny::SimplyConnected, Isogeny::Adjoint];
                match series {
                    Series::A => {
                        isogenies.extend(
                            arith::divisors(fund.order() as u64)
                                .into_iter()
                                .filter(|&r| r > 1 && r < fund.order() as u64)
                                .map(|r| Isogeny::Quotient(r as u32)),
                        );
                    }
                    Series::D => {
                        isogenies.push(Isogeny::SpecialOrthogonal);
                        if rank % 2 == 0 && twist == Twist::Split {
                            isogenies.push(Isogeny::HalfSpin);
                        }
                    }
                    _ => {}
                }
                for iso in isogenies {
                    if let Ok(spec) = GroupSpec::new(series, rank, iso, twist) {
                        if !out.contains(&spec) {
                            out.push(spec);
                        }
                    }
                }
                if series == Series::A {
                    if let Ok(spec) = GroupSpec::connected_center(rank, twist) {
                        out.push(spec);
                    }
                }
            }
        }
    }
    out
}

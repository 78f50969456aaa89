//! Conjugacy classes by orbit enumeration under generator conjugation.

use serde::Serialize;

use super::group::FiniteGroup;
use crate::arith;

/// Partition of a group into conjugacy classes. Class 0 is the identity.
#[derive(Clone, Debug, Serialize)]
pub struct ConjugacyClasses {
    /// Element index of each class representative.
    pub reps: Vec<u32>,
    pub sizes: Vec<u32>,
    /// Class index of every element.
    #[serde(skip)]
    pub class_of: Vec<u32>,
    /// Order of the elements in each class.
    pub element_orders: Vec<u32>,
}

impl ConjugacyClasses {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Class of `x^-1` for each class.
    pub fn inverse_classes(&self, g: &FiniteGroup) -> Vec<u32> {
        self.reps.iter().map(|&x| self.class_of[g.inv(x) as usize]).collect()
    }

    /// Class of `x^e` for each class.
    pub fn power_classes(&self, g: &FiniteGroup, e: u64) -> Vec<u32> {
        self.reps.iter().map(|&x| self.class_of[g.pow(x, e) as usize]).collect()
    }

    /// Members of every class.
    pub fn members(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.len()];
        for (x, &c) in self.class_of.iter().enumerate() {
            out[c as usize].push(x as u32);
        }
        out
    }
}

pub fn conjugacy_classes(g: &FiniteGroup) -> ConjugacyClasses {
    let gens = g.generators();
    let n = g.order() as usize;
    let mut class_of = vec![u32::MAX; n];
    let mut reps = Vec::new();
    let mut sizes = Vec::new();
    let mut stack = Vec::new();
    for x in 0..n as u32 {
        if class_of[x as usize] != u32::MAX {
            continue;
        }
        let c = reps.len() as u32;
        reps.push(x);
        class_of[x as usize] = c;
        stack.push(x);
        let mut size = 1;
        while let Some(y) = stack.pop() {
            for &s in &gens {
                let z = g.conj(s, y);
                if class_of[z as usize] == u32::MAX {
                    class_of[z as usize] = c;
                    size += 1;
                    stack.push(z);
                }
            }
        }
        sizes.push(size);
    }
    let element_orders = reps.iter().map(|&x| g.element_order(x)).collect();
    ConjugacyClasses { reps, sizes, class_of, element_orders }
}

/// Number of classes of elements of order prime to `p`.
pub fn semisimple_class_count_bf(classes: &ConjugacyClasses, p: u64) -> usize {
    classes
        .element_orders
        .iter()
        .filter(|&&o| arith::gcd(o as u64, p) == 1)
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::group::{build_group, GroupName};

    #[test]
    fn small_class_numbers() {
        let sl23 = build_group(GroupName::Sl2, 3).unwrap();
        let c = conjugacy_classes(&sl23);
        assert_eq!(c.len(), 7);
        assert_eq!(c.sizes.iter().sum::<u32>(), 24);
        assert_eq!(c.reps[0], 0);
        assert_eq!(semisimple_class_count_bf(&c, 3), 3);

        let sl32 = build_group(GroupName::Sl3, 2).unwrap();
        let c = conjugacy_classes(&sl32);
        assert_eq!(c.len(), 6);
        assert_eq!(semisimple_class_count_bf(&c, 2), 4);
    }

    #[test]
    fn trivial_group_has_one_class() {
        let g = build_group(GroupName::Gl1, 2).unwrap();
        let c = conjugacy_classes(&g);
        assert_eq!(c.len(), 1);
        assert_eq!(semisimple_class_count_bf(&c, 2), 1);
    }
}

//! Structure of an explicitly enumerated finite abelian p-group.
//!
//! Generators are adjoined greedily; each new generator `g` contributes the
//! relation `m g = h` where `m` is minimal with `m g` in the span so far. These
//! triangular relations generate the full relation lattice, so the Smith form of
//! the relation matrix gives the group.

use std::collections::{HashMap, HashSet};
use std::hash::Hash;

use super::{AbelianPGroup, ZpMatrix};
use crate::arith::{prime_power, vp};
use crate::error::{Error, Result};

/// Coordinates of every group element in a greedy generating set.
pub struct GroupTable<T> {
    p: u64,
    zero: T,
    coords: HashMap<T, Vec<u64>>,
    relations: Vec<(usize, u64, Vec<u64>)>,
}

impl<T: Hash + Eq + Clone> GroupTable<T> {
    pub fn build<I, F>(p: u64, zero: T, elements: I, add: F) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        F: Fn(&T, &T) -> T,
    {
        let mut coords: HashMap<T, Vec<u64>> = HashMap::new();
        coords.insert(zero.clone(), Vec::new());
        let mut relations = Vec::new();
        for g in elements {
            if coords.contains_key(&g) {
                continue;
            }
            let k = relations.len();
            let mut m = 1u64;
            let mut x = g.clone();
            while !coords.contains_key(&x) {
                x = add(&x, &g);
                m += 1;
            }
            relations.push((k, m, coords[&x].clone()));
            let old: Vec<(T, Vec<u64>)> = coords.iter().map(|(a, b)| (a.clone(), b.clone())).collect();
            let mut jg = g.clone();
            for j in 1..m {
                for (h, c) in &old {
                    let mut c2 = c.clone();
                    c2.resize(k, 0);
                    c2.push(j);
                    coords.insert(add(h, &jg), c2);
                }
                jg = add(&jg, &g);
            }
        }
        let order = coords.len() as u64;
        if order > 1 && prime_power(order).map(|(q, _)| q) != Some(p) {
            return Err(Error::Precondition(format!(
                "group of order {order} is not a {p}-group"
            )));
        }
        Ok(GroupTable {
            p,
            zero,
            coords,
            relations,
        })
    }

    pub fn order(&self) -> u64 {
        self.coords.len() as u64
    }

    pub fn generator_count(&self) -> usize {
        self.relations.len()
    }

    /// Working precision: the group is killed by p^N.
    fn precision(&self) -> u32 {
        vp(self.order(), self.p) + 1
    }

    fn relation_matrix(&self, extra: &[Vec<u64>]) -> ZpMatrix {
        let k = self.relations.len();
        let prec = self.precision();
        let mut m = ZpMatrix::zeros(self.p, prec, k, k + extra.len());
        let modulus = m.modulus();
        for (col, (i, mult, c)) in self.relations.iter().enumerate() {
            m.set(*i, col, *mult % modulus);
            for (j, &cj) in c.iter().enumerate() {
                let cur = m.get(j, col);
                m.set(j, col, cur + modulus - cj % modulus);
            }
        }
        for (e, v) in extra.iter().enumerate() {
            for (j, &x) in v.iter().enumerate() {
                m.set(j, k + e, x % modulus);
            }
        }
        m
    }

    pub fn coordinates(&self, x: &T) -> Option<&[u64]> {
        self.coords.get(x).map(Vec::as_slice)
    }

    pub fn structure(&self) -> AbelianPGroup {
        AbelianPGroup::from_exponents(self.p, self.relation_matrix(&[]).cokernel_exponents())
    }

    /// Structure of the quotient by the subgroup generated by `subgroup`.
    /// Elements already in the span of earlier ones are dropped, so at most
    /// log_p |G| columns reach the Smith form.
    pub fn quotient<I, F>(&self, subgroup: I, add: F) -> Result<AbelianPGroup>
    where
        I: IntoIterator<Item = T>,
        F: Fn(&T, &T) -> T,
    {
        let mut span: HashSet<T> = HashSet::from([self.zero.clone()]);
        let mut gens = Vec::new();
        for h in subgroup {
            if span.contains(&h) {
                continue;
            }
            let mut frontier: Vec<T> = span.iter().cloned().collect();
            while !frontier.is_empty() {
                frontier = frontier
                    .iter()
                    .map(|s| add(s, &h))
                    .filter(|x| span.insert(x.clone()))
                    .collect();
            }
            gens.push(h);
        }
        let extra = gens
            .into_iter()
            .map(|h| {
                self.coords
                    .get(&h)
                    .cloned()
                    .ok_or_else(|| Error::Precondition("subgroup element outside the group".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AbelianPGroup::from_exponents(
            self.p,
            self.relation_matrix(&extra).cokernel_exponents(),
        ))
    }
}

/// Structure of a finite abelian p-group given by all its elements and its addition.
pub fn structure_of<T, I, F>(p: u64, zero: T, elements: I, add: F) -> Result<AbelianPGroup>
where
    T: Hash + Eq + Clone,
    I: IntoIterator<Item = T>,
    F: Fn(&T, &T) -> T,
{
    Ok(GroupTable::build(p, zero, elements, add)?.structure())
}

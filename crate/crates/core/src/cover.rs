//! Index-3 torsion-free surface cover of O_{3,3,3,3} via the
//! Reidemeister-Schreier procedure on the kernel of the Z/3 character
//! g1, g3 -> 1, g2, g4 -> 2.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};

use crate::error::Result;
use crate::intmat::{abelian_invariants, IntMat};
use crate::matrix::Mat;
use crate::scalar::Field;
use crate::words::{orbifold_presentation, GroupWord, Representation};

pub const INDEX: usize = 3;

/// Character values of g1..g4 in Z/3.
pub const CHARACTER: [i64; 4] = [1, 2, 1, 2];

#[derive(Clone, Debug)]
pub struct SubgroupData {
    pub index: usize,
    /// coset_table[c][j] = image of coset c under g_{j+1}
    pub coset_table: Vec<Vec<usize>>,
    /// coset representatives, coset 0 = the subgroup
    pub transversal: Vec<GroupWord>,
    /// Schreier generator symbols with their ambient words
    pub schreier_gens: Vec<(String, GroupWord)>,
    /// relators of the presented subgroup, as words in the Schreier symbols
    pub subgroup_relators: Vec<GroupWord>,
    /// nonunit invariant factors of the abelianized subgroup (0 = free factor)
    pub abelianization: Vec<BigInt>,
    /// every g_i^k (k = 1, 2) permutes the cosets nontrivially
    pub torsion_free: bool,
    pub euler_characteristic: i64,
    pub genus: usize,
}

fn coset_action(c: usize, gen_idx: usize, exp_sign: i64) -> usize {
    let chi = CHARACTER[gen_idx];
    let step = if exp_sign >= 0 { chi } else { 3 - chi };
    ((c as i64 + step) % 3) as usize
}

fn gen_index(name: &str) -> usize {
    match name {
        "g1" => 0,
        "g2" => 1,
        "g3" => 2,
        "g4" => 3,
        _ => panic!("unexpected generator {name}"),
    }
}

/// Rewrite an ambient word that lies in the kernel as a word in Schreier
/// symbols, starting from coset `start`.
fn rewrite(
    word: &GroupWord,
    start: usize,
    symbol_of: &BTreeMap<(usize, usize), Option<String>>,
) -> GroupWord {
    let mut out = GroupWord::identity();
    let mut coset = start;
    for (g, e) in word.letters() {
        let j = gen_index(g);
        let reps = e.unsigned_abs();
        for _ in 0..reps {
            if *e > 0 {
                if let Some(sym) = &symbol_of[&(coset, j)] {
                    out.push(sym, 1);
                }
                coset = coset_action(coset, j, 1);
            } else {
                coset = coset_action(coset, j, -1);
                if let Some(sym) = &symbol_of[&(coset, j)] {
                    out.push(sym, -1);
                }
            }
        }
    }
    out
}

/// Full Reidemeister-Schreier data for the index-3 kernel.
pub fn surface_cover_mod3() -> SubgroupData {
    let pres = orbifold_presentation();
    let coset_table: Vec<Vec<usize>> = (0..INDEX)
        .map(|c| (0..4).map(|j| coset_action(c, j, 1)).collect())
        .collect();
    // Schreier transversal: coset i represented by g1^i
    let transversal: Vec<GroupWord> = (0..INDEX as i64).map(|i| GroupWord::power("g1", i)).collect();

    // Schreier generators s(i, j) = r_i g_j (r_{i.g_j})^-1, trivial ones dropped
    let mut schreier_gens = Vec::new();
    let mut symbol_of: BTreeMap<(usize, usize), Option<String>> = BTreeMap::new();
    for i in 0..INDEX {
        for j in 0..4 {
            let target = coset_action(i, j, 1);
            let word = transversal[i]
                .concat(&GroupWord::gen(&format!("g{}", j + 1)))
                .concat(&transversal[target].inverse());
            if word.is_identity() {
                symbol_of.insert((i, j), None);
            } else {
                let name = format!("s{}", schreier_gens.len() + 1);
                symbol_of.insert((i, j), Some(name.clone()));
                schreier_gens.push((name, word));
            }
        }
    }

    // subgroup relators: rewrite r_i R r_i^-1 for every relator R and coset i
    let mut subgroup_relators = Vec::new();
    for i in 0..INDEX {
        for rel in &pres.relators {
            let conj = transversal[i].concat(rel).concat(&transversal[i].inverse());
            subgroup_relators.push(rewrite(&conj, 0, &symbol_of));
        }
    }

    // abelianization of the presented subgroup
    let k = schreier_gens.len();
    let name_index: BTreeMap<&str, usize> = schreier_gens
        .iter()
        .enumerate()
        .map(|(idx, (n, _))| (n.as_str(), idx))
        .collect();
    let mut rel_mat = IntMat::zero(subgroup_relators.len(), k);
    for (r, w) in subgroup_relators.iter().enumerate() {
        for (g, e) in w.letters() {
            let c = name_index[g.as_str()];
            *rel_mat.at_mut(r, c) += BigInt::from(*e);
        }
    }
    let invariants: Vec<BigInt> = abelian_invariants(&rel_mat, k)
        .into_iter()
        .filter(|d| !d.is_one())
        .collect();

    // torsion certificate: g_i^k acts nontrivially on cosets for k = 1, 2,
    // so no conjugate of a nontrivial torsion element lies in the kernel
    let torsion_free = (0..4).all(|j| {
        (1..3).all(|k| (0..INDEX).any(|c| (0..k).fold(c, |cc, _| coset_action(cc, j, 1)) != c))
    });

    let free_rank = invariants.iter().filter(|d| num_traits::Zero::is_zero(*d)).count();
    let genus = free_rank / 2;
    SubgroupData {
        index: INDEX,
        coset_table,
        transversal,
        schreier_gens,
        subgroup_relators,
        abelianization: invariants,
        torsion_free,
        euler_characteristic: 2 - 2 * genus as i64,
        genus,
    }
}

impl SubgroupData {
    /// Images of the Schreier generators under an ambient representation.
    pub fn restricted_images<F: Field>(&self, rep: &Representation<F>) -> Result<Vec<Mat<F>>> {
        self.schreier_gens
            .iter()
            .map(|(_, w)| rep.evaluate(w))
            .collect()
    }

    /// Evaluate every presented subgroup relator through the ambient
    /// representation; true iff each is exactly the identity.
    pub fn check_subgroup_relations<F: Field>(&self, rep: &Representation<F>) -> Result<bool> {
        let images: BTreeMap<String, Mat<F>> = self
            .schreier_gens
            .iter()
            .map(|(name, w)| Ok((name.clone(), rep.evaluate(w)?)))
            .collect::<Result<_>>()?;
        let n = rep.dim();
        for rel in &self.subgroup_relators {
            let mut acc = Mat::<F>::identity(n);
            for (g, e) in rel.letters() {
                let m = &images[g];
                let p = if *e >= 0 { m.pow(*e as u64) } else { m.inv()?.pow((-e) as u64) };
                acc = acc.mul(&p);
            }
            if !acc.is_identity() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "index": self.index,
            "character": CHARACTER,
            "coset_table": self.coset_table,
            "transversal": self.transversal.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            "schreier_generators": self.schreier_gens.iter()
                .map(|(n, w)| json!({"symbol": n, "word": w.to_string()}))
                .collect::<Vec<_>>(),
            "subgroup_relators": self.subgroup_relators.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            "abelianization": self.abelianization.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            "torsion_free": self.torsion_free,
            "euler_characteristic": self.euler_characteristic,
            "genus": self.genus,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn index_and_schreier_count() {
        let data = surface_cover_mod3();
        assert_eq!(data.index, 3);
        // Nielsen-Schreier style count: 3*4 - (3-1) = 10
        assert_eq!(data.schreier_gens.len(), 10);
        assert_eq!(data.subgroup_relators.len(), 15);
    }

    #[test]
    fn coset_permutations() {
        let data = surface_cover_mod3();
        // g1 is a 3-cycle on cosets
        assert_eq!(data.coset_table[0][0], 1);
        assert_eq!(data.coset_table[1][0], 2);
        assert_eq!(data.coset_table[2][0], 0);
        // table is a complete consistent permutation action
        for j in 0..4 {
            let mut seen = [false; 3];
            for c in 0..3 {
                seen[data.coset_table[c][j]] = true;
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn abelianization_is_z4() {
        let data = surface_cover_mod3();
        assert_eq!(data.abelianization.len(), 4);
        assert!(data.abelianization.iter().all(Zero::is_zero));
        assert_eq!(data.genus, 2);
        assert_eq!(data.euler_characteristic, -2);
    }

    #[test]
    fn torsion_free_certificate() {
        let data = surface_cover_mod3();
        assert!(data.torsion_free);
    }

    #[test]
    fn schreier_words_lie_in_the_kernel() {
        let data = surface_cover_mod3();
        for (_, w) in &data.schreier_gens {
            let chi: i64 = w.letters().iter().map(|(g, e)| CHARACTER[gen_index(g)] * e).sum();
            assert_eq!(chi.rem_euclid(3), 0, "word {w} not in kernel");
        }
    }

    #[test]
    fn subgroup_relators_hold_under_omega3() {
        use crate::sympow::omega_n;
        use crate::words::sigma_representation;
        let sigma = sigma_representation();
        let rep = Representation::new(
            sigma.presentation.clone(),
            sigma
                .images
                .iter()
                .map(|(k, v)| (k.clone(), omega_n(v, 3).unwrap()))
                .collect(),
        );
        let data = surface_cover_mod3();
        assert!(data.check_subgroup_relations(&rep).unwrap());
        assert_eq!(data.restricted_images(&rep).unwrap().len(), 10);
    }
}

//! Group words, presentations and matrix representations of the triangle
//! group Delta(3,4,4) and the orbifold group pi_1(O_{3,3,3,3}).

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::scalar::{Field, Sqrt2};

/// Freely reduced word: sequence of (generator, exponent != 0) with adjacent
/// letters on distinct generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupWord {
    letters: Vec<(String, i64)>,
}

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord { letters: Vec::new() }
    }

    pub fn gen(name: &str) -> Self {
        GroupWord { letters: vec![(name.to_string(), 1)] }
    }

    pub fn power(name: &str, e: i64) -> Self {
        if e == 0 {
            GroupWord::identity()
        } else {
            GroupWord { letters: vec![(name.to_string(), e)] }
        }
    }

    pub fn letters(&self) -> &[(String, i64)] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn push(&mut self, name: &str, e: i64) {
        if e == 0 {
            return;
        }
        if let Some(last) = self.letters.last_mut() {
            if last.0 == name {
                last.1 += e;
                if last.1 == 0 {
                    self.letters.pop();
                }
                return;
            }
        }
        self.letters.push((name.to_string(), e));
    }

    pub fn concat(&self, rhs: &GroupWord) -> GroupWord {
        let mut w = self.clone();
        for (g, e) in &rhs.letters {
            w.push(g, *e);
        }
        w
    }

    pub fn inverse(&self) -> GroupWord {
        let mut w = GroupWord::identity();
        for (g, e) in self.letters.iter().rev() {
            w.push(g, -e);
        }
        w
    }

    /// Parse the CLI/JSON syntax "g1*g2^-1*g3". Whitespace is ignored.
    pub fn parse(s: &str) -> Result<GroupWord> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut w = GroupWord::identity();
        if s.is_empty() || s == "1" {
            return Ok(w);
        }
        for part in s.split('*') {
            let (name, exp) = match part.split_once('^') {
                Some((n, e)) => {
                    let e: i64 = e
                        .parse()
                        .map_err(|_| Error::WordSyntax(format!("bad exponent in {part:?}")))?;
                    (n, e)
                }
                None => (part, 1),
            };
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::WordSyntax(format!("bad generator name {name:?}")));
            }
            w.push(name, exp);
        }
        Ok(w)
    }
}

impl std::fmt::Display for GroupWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|(g, e)| if *e == 1 { g.clone() } else { format!("{g}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Finite presentation: generator names and relator words.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<GroupWord>,
}

/// Delta(3,4,4) = < x, y | x^3, y^4, (xy)^4 >.
pub fn triangle_presentation() -> Presentation {
    let xy4 = {
        let mut w = GroupWord::identity();
        for _ in 0..4 {
            w.push("x", 1);
            w.push("y", 1);
        }
        w
    };
    Presentation {
        generators: vec!["x".into(), "y".into()],
        relators: vec![GroupWord::power("x", 3), GroupWord::power("y", 4), xy4],
    }
}

/// pi_1(O_{3,3,3,3}) = < g1..g4 | g1^3, ..., g4^3, g1 g2 g3 g4 >.
pub fn orbifold_presentation() -> Presentation {
    let mut generators = Vec::new();
    let mut relators = Vec::new();
    for i in 1..=4 {
        generators.push(format!("g{i}"));
        relators.push(GroupWord::power(&format!("g{i}"), 3));
    }
    let mut prod = GroupWord::identity();
    for i in 1..=4 {
        prod.push(&format!("g{i}"), 1);
    }
    relators.push(prod);
    Presentation { generators, relators }
}

/// Assignment generator -> matrix, against a fixed presentation.
#[derive(Clone, Debug)]
pub struct Representation<F: Field> {
    pub presentation: Presentation,
    pub images: BTreeMap<String, Mat<F>>,
}

impl<F: Field> Representation<F> {
    pub fn new(presentation: Presentation, images: BTreeMap<String, Mat<F>>) -> Self {
        Representation { presentation, images }
    }

    pub fn dim(&self) -> usize {
        self.images.values().next().map_or(0, Mat::rows)
    }

    pub fn generator_images(&self) -> Vec<Mat<F>> {
        self.presentation
            .generators
            .iter()
            .map(|g| self.images[g].clone())
            .collect()
    }

    /// Product of generator images along a word; inverses exact.
    pub fn evaluate(&self, w: &GroupWord) -> Result<Mat<F>> {
        let n = self.dim();
        let mut acc = Mat::identity(n);
        for (g, e) in w.letters() {
            let m = self
                .images
                .get(g)
                .ok_or_else(|| Error::UnknownGenerator(g.clone()))?;
            let p = if *e >= 0 {
                m.pow(*e as u64)
            } else {
                m.inv()?.pow((-e) as u64)
            };
            acc = acc.mul(&p);
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "field": F::field_tag(),
            "generators": self.presentation.generators,
            "images": self.presentation.generators.iter()
                .map(|g| self.images[g].to_json()).collect::<Vec<_>>(),
        })
    }
}

/// Per-relator outcome of a relation check.
#[derive(Clone, Debug, serde::Serialize)]
pub struct RelationReport {
    pub relator: String,
    /// image is exactly the identity
    pub identity: bool,
    /// image is minus the identity (projectively trivial, 2x2 checks)
    pub minus_identity: bool,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct RelationCheck {
    pub projective: bool,
    pub relations: Vec<RelationReport>,
    pub pass: bool,
}

/// Check every relator of the presentation. With `allow_center`, images
/// equal to -I count as passing (PSL(2) checks on SL(2) matrices).
pub fn check_relations<F: Field>(rep: &Representation<F>, allow_center: bool) -> RelationCheck {
    let n = rep.dim();
    let id = Mat::<F>::identity(n);
    let minus_id = id.scale(&F::from_int(-1));
    let mut reports = Vec::new();
    let mut pass = true;
    for r in &rep.presentation.relators {
        let img = rep.evaluate(r).expect("relator uses presentation generators");
        let identity = img == id;
        let minus_identity = img == minus_id;
        if !(identity || (allow_center && minus_identity)) {
            pass = false;
        }
        reports.push(RelationReport { relator: r.to_string(), identity, minus_identity });
    }
    RelationCheck { projective: allow_center, relations: reports, pass }
}

/// Generators of the triangle group Delta(3,4,4) in SL(2, Q(sqrt2)):
/// x = [[0,-1],[1,1]], y = [[0,-1-sqrt2],[-1+sqrt2,sqrt2]].
pub fn triangle_generators() -> (Mat<Sqrt2>, Mat<Sqrt2>) {
    let x = Mat::mat2(
        Sqrt2::from_ints(0, 0),
        Sqrt2::from_ints(-1, 0),
        Sqrt2::from_ints(1, 0),
        Sqrt2::from_ints(1, 0),
    );
    let y = Mat::mat2(
        Sqrt2::from_ints(0, 0),
        Sqrt2::from_ints(-1, -1),
        Sqrt2::from_ints(-1, 1),
        Sqrt2::from_ints(0, 1),
    );
    (x, y)
}

/// theta_1 = x, theta_i = y theta_{i-1} y^{-1}: the order-3 rotations
/// generating the image of pi_1(O_{3,3,3,3}) inside Delta(3,4,4).
pub fn theta_generators() -> [Mat<Sqrt2>; 4] {
    let (x, y) = triangle_generators();
    let y_inv = y.inv().expect("det(y) = 1");
    let t1 = x;
    let t2 = y.mul(&t1).mul(&y_inv);
    let t3 = y.mul(&t2).mul(&y_inv);
    let t4 = y.mul(&t3).mul(&y_inv);
    [t1, t2, t3, t4]
}

/// The Fuchsian representation sigma: g_i -> theta_i as a 2x2 projective
/// representation over Q(sqrt2).
pub fn sigma_representation() -> Representation<Sqrt2> {
    let thetas = theta_generators();
    let pres = orbifold_presentation();
    let images = pres
        .generators
        .iter()
        .cloned()
        .zip(thetas.into_iter())
        .collect();
    Representation::new(pres, images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn word_parse_and_reduce() {
        let w = GroupWord::parse("g1*g2^-1*g2*g3").unwrap();
        assert_eq!(w.to_string(), "g1*g3");
        let w = GroupWord::parse("x^3").unwrap();
        assert_eq!(w.letters(), &[("x".to_string(), 3)]);
        assert!(GroupWord::parse("x^").is_err());
        assert!(GroupWord::parse("*").is_err());
        let e = GroupWord::parse("1").unwrap();
        assert!(e.is_identity());
    }

    #[test]
    fn word_inverse_cancels() {
        let w = GroupWord::parse("g1*g2^2*g3^-1").unwrap();
        assert!(w.concat(&w.inverse()).is_identity());
    }

    #[test]
    fn triangle_generator_entries() {
        let (x, y) = triangle_generators();
        assert_eq!(x.at(0, 0), &Sqrt2::from_ints(0, 0));
        assert_eq!(x.at(0, 1), &Sqrt2::from_ints(-1, 0));
        assert_eq!(x.at(1, 0), &Sqrt2::from_ints(1, 0));
        assert_eq!(x.at(1, 1), &Sqrt2::from_ints(1, 0));
        assert_eq!(y.at(0, 1), &Sqrt2::from_ints(-1, -1));
        assert_eq!(y.at(1, 0), &Sqrt2::from_ints(-1, 1));
        assert_eq!(y.at(1, 1), &Sqrt2::from_ints(0, 1));
        assert_eq!(x.det(), Sqrt2::from_ints(1, 0));
        assert_eq!(y.det(), Sqrt2::from_ints(1, 0));
    }

    #[test]
    fn triangle_relations_hold_projectively() {
        let (x, y) = triangle_generators();
        let minus_id = Mat::<Sqrt2>::identity(2).scale(&Sqrt2::from_ints(-1, 0));
        assert_eq!(x.pow(3), minus_id);
        assert_eq!(y.pow(4), minus_id);
        assert_eq!(x.mul(&y).pow(4), minus_id);
    }

    #[test]
    fn theta_facts() {
        let th = theta_generators();
        // all conjugate to x: trace 1, det 1, cube = -I
        let minus_id = Mat::<Sqrt2>::identity(2).scale(&Sqrt2::from_ints(-1, 0));
        for t in &th {
            assert_eq!(t.trace(), Sqrt2::from_ints(1, 0));
            assert_eq!(t.det(), Sqrt2::from_ints(1, 0));
            assert_eq!(t.pow(3), minus_id);
        }
        // pairwise distinct
        for i in 0..4 {
            for j in i + 1..4 {
                assert_ne!(th[i], th[j]);
            }
        }
        // theta1 theta2 theta3 theta4 = I in SL(2) here
        let prod = th[0].mul(&th[1]).mul(&th[2]).mul(&th[3]);
        assert!(prod.is_identity());
        // theta2 = y x y^-1 explicitly
        let (x, y) = triangle_generators();
        assert_eq!(th[1], y.mul(&x).mul(&y.inv().unwrap()));
    }

    #[test]
    fn sigma_passes_projective_relation_check() {
        let sigma = sigma_representation();
        let check = check_relations(&sigma, true);
        assert!(check.pass);
        // and the product relator holds exactly
        let prod = sigma
            .evaluate(&GroupWord::parse("g1*g2*g3*g4").unwrap())
            .unwrap();
        assert!(prod.is_identity());
    }

    #[test]
    fn corrupted_generator_fails_named_relator() {
        let mut sigma = sigma_representation();
        let g1 = sigma.images.get_mut("g1").unwrap();
        *g1.at_mut(0, 0) = g1.at(0, 0).add(&Sqrt2::one());
        let check = check_relations(&sigma, true);
        assert!(!check.pass);
        let bad: Vec<&str> = check
            .relations
            .iter()
            .filter(|r| !r.identity && !r.minus_identity)
            .map(|r| r.relator.as_str())
            .collect();
        assert!(bad.contains(&"g1^3"));
    }

    #[test]
    fn evaluate_is_homomorphic_on_sample_words() {
        let sigma = sigma_representation();
        let w1 = GroupWord::parse("g1*g2^-1").unwrap();
        let w2 = GroupWord::parse("g3^2*g4").unwrap();
        let lhs = sigma.evaluate(&w1.concat(&w2)).unwrap();
        let rhs = sigma.evaluate(&w1).unwrap().mul(&sigma.evaluate(&w2).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluate_unknown_generator() {
        let sigma = sigma_representation();
        assert!(matches!(
            sigma.evaluate(&GroupWord::parse("z").unwrap()),
            Err(Error::UnknownGenerator(_))
        ));
    }

    #[test]
    fn evaluate_empty_word_is_identity() {
        let sigma = sigma_representation();
        let m = sigma.evaluate(&GroupWord::identity()).unwrap();
        assert!(m.is_identity());
        let _ = rat(0, 1);
    }
}

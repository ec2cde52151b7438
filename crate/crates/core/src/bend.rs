//! Bending the orbifold representation along the separating curve
//! [gamma] = g1 g2: conjugator construction, the bent representation, and
//! the loxodromy certificate for rho([gamma]).

use num_bigint::BigInt;
use num_traits::Signed;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::scalar::{rat_to_string, Field, Rational, Sqrt2, Tower};
use crate::words::Representation;

/// Nonnegative rational bending parameter.
#[derive(Clone, PartialEq, Debug)]
pub struct BendParameter(Rational);

impl BendParameter {
    pub fn new(t: Rational) -> Result<Self> {
        if t.numer().is_negative() {
            return Err(Error::NegativeBendParameter(rat_to_string(&t)));
        }
        Ok(BendParameter(t))
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(&self.0)
    }

    pub fn to_string_exact(&self) -> String {
        rat_to_string(&self.0)
    }
}

/// The unnormalized bending conjugator M_t = t * rho(gamma) + I. Conjugation
/// by M_t agrees with conjugation by the determinant-normalized version
/// since the scalar cancels, and M_t keeps rational entries rational.
pub fn conjugator<F: Field>(rho_gamma: &Mat<F>, t: &BendParameter, normalized: bool) -> Result<Mat<F>> {
    let n = rho_gamma.rows();
    let t_f = F::from_rational(t.value());
    let mut m = rho_gamma.scale(&t_f);
    for i in 0..n {
        *m.at_mut(i, i) = m.at(i, i).add(&F::one());
    }
    let det = m.det();
    if det.is_zero() {
        return Err(Error::SingularConjugator);
    }
    if normalized {
        // refuse unless det is an exact n-th power in the field; only the
        // rational case is supported and only via integer n-th roots
        match nth_root_in_field(&det, n) {
            Some(root_inv) => Ok(m.scale(&root_inv)),
            None => Err(Error::IrrationalNormalization(n)),
        }
    } else {
        Ok(m)
    }
}

/// det^(-1/n) when det is an exact n-th power of a rational in F.
fn nth_root_in_field<F: Field>(det: &F, n: usize) -> Option<F> {
    let r = det.to_rational()?;
    let negative = r.numer().is_negative();
    if negative && n % 2 == 0 {
        return None;
    }
    let num_abs: BigInt = r.numer().abs();
    let num_root = num_abs.nth_root(n as u32);
    let den_root = r.denom().nth_root(n as u32);
    if num_root.pow(n as u32) == num_abs && &den_root.pow(n as u32) == r.denom() {
        let signed = if negative { -num_root } else { num_root };
        let root = Rational::new(signed, den_root);
        F::from_rational(&root).inv()
    } else {
        None
    }
}

/// Bent representation: g1, g2 keep their images, g3, g4 are conjugated by
/// M_t where gamma = g1 g2.
#[derive(Clone, Debug)]
pub struct BentRepresentation<F: Field> {
    pub rep: Representation<F>,
    pub t: BendParameter,
    pub conjugator: Mat<F>,
}

pub fn bend<F: Field>(rho: &Representation<F>, t: &BendParameter) -> Result<BentRepresentation<F>> {
    let g1 = &rho.images["g1"];
    let g2 = &rho.images["g2"];
    let rho_gamma = g1.mul(g2);
    let m_t = conjugator(&rho_gamma, t, false)?;
    let m_inv = m_t.inv().map_err(|_| Error::SingularConjugator)?;
    let mut images = rho.images.clone();
    for g in ["g3", "g4"] {
        let bent = m_t.mul(&rho.images[g]).mul(&m_inv);
        images.insert(g.to_string(), bent);
    }
    Ok(BentRepresentation {
        rep: Representation::new(rho.presentation.clone(), images),
        t: t.clone(),
        conjugator: m_t,
    })
}

/// Loxodromy certificate for the omega_n image of a hyperbolic 2x2 element.
#[derive(Clone, Debug)]
pub struct LoxodromyCertificate {
    /// trace of the 2x2 element, after replacing the lift by its negative
    /// when the raw trace is negative (omega_n is blind to the sign for odd n)
    pub trace: Sqrt2,
    pub trace_was_negated: bool,
    /// lambda = (tau + sqrt(tau^2 - 4)) / 2 > 1 in the tower field
    pub lambda: Tower,
    /// the n eigenvalues lambda^{n-1-2j}, all positive and pairwise distinct
    pub eigenvalues: Vec<Tower>,
    pub all_positive: bool,
    pub pairwise_distinct: bool,
}

impl LoxodromyCertificate {
    pub fn pass(&self) -> bool {
        self.all_positive && self.pairwise_distinct
    }

    pub fn to_json(&self) -> Value {
        json!({
            "trace": self.trace.to_json(),
            "trace_was_negated": self.trace_was_negated,
            "lambda": self.lambda.to_json(),
            "eigenvalues": self.eigenvalues.iter().map(Tower::to_json).collect::<Vec<_>>(),
            "all_positive": self.all_positive,
            "pairwise_distinct": self.pairwise_distinct,
            "pass": self.pass(),
        })
    }
}

/// Certify that the omega_n image of `rho_gamma_2x2` lifts to a matrix with
/// n distinct positive eigenvalues.
pub fn loxodromy_certificate(rho_gamma_2x2: &Mat<Sqrt2>, n: usize) -> Result<LoxodromyCertificate> {
    if n <= 1 || n % 2 == 0 {
        return Err(Error::InvalidDegree(n));
    }
    if rho_gamma_2x2.det() != Sqrt2::one() {
        return Err(Error::NotUnimodular);
    }
    let raw_tau = rho_gamma_2x2.trace();
    let disc = raw_tau.mul(&raw_tau).sub(&Sqrt2::from_int(4));
    if disc.sign() <= 0 {
        return Err(Error::NotLoxodromic);
    }
    let negated = raw_tau.sign() < 0;
    let tau = if negated { raw_tau.neg() } else { raw_tau };
    // lambda = (tau + sqrt(tau^2-4))/2 with tau > 2, hence lambda > 1
    let half = Sqrt2::from_int(2).inv().unwrap();
    let lambda = Tower::new(tau.mul(&half), half, disc);
    let lambda_inv = lambda.inv().expect("lambda nonzero");
    let mut eigenvalues = Vec::with_capacity(n);
    for j in 0..n {
        let e = (n as i64 - 1) - 2 * j as i64;
        let mut acc = Tower::one();
        let base = if e >= 0 { &lambda } else { &lambda_inv };
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(base);
        }
        eigenvalues.push(acc);
    }
    let all_positive = eigenvalues.iter().all(|e| e.sign() > 0);
    let mut pairwise_distinct = true;
    for i in 0..n {
        for j in i + 1..n {
            if eigenvalues[i] == eigenvalues[j] {
                pairwise_distinct = false;
            }
        }
    }
    Ok(LoxodromyCertificate {
        trace: tau,
        trace_was_negated: negated,
        lambda,
        eigenvalues,
        all_positive,
        pairwise_distinct,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::sympow::omega_n;
    use crate::words::{check_relations, sigma_representation, theta_generators, GroupWord};

    fn omega_sigma(n: usize) -> Representation<Sqrt2> {
        let sigma = sigma_representation();
        Representation::new(
            sigma.presentation.clone(),
            sigma
                .images
                .iter()
                .map(|(k, v)| (k.clone(), omega_n(v, n).unwrap()))
                .collect(),
        )
    }

    #[test]
    fn bend_parameter_rejects_negative() {
        assert!(BendParameter::new(rat(-1, 1)).is_err());
        assert!(BendParameter::new(rat(0, 1)).is_ok());
        assert!(BendParameter::new(rat(3, 7)).is_ok());
    }

    #[test]
    fn conjugator_at_zero_is_identity() {
        let rep = omega_sigma(3);
        let rho_gamma = rep.images["g1"].mul(&rep.images["g2"]);
        let t0 = BendParameter::new(rat(0, 1)).unwrap();
        assert!(conjugator(&rho_gamma, &t0, false).unwrap().is_identity());
    }

    #[test]
    fn conjugator_commutes_with_rho_gamma() {
        let rep = omega_sigma(3);
        let rho_gamma = rep.images["g1"].mul(&rep.images["g2"]);
        let t = BendParameter::new(rat(1, 1)).unwrap();
        let m = conjugator(&rho_gamma, &t, false).unwrap();
        assert_eq!(m.mul(&rho_gamma), rho_gamma.mul(&m));
    }

    #[test]
    fn bend_at_zero_reproduces_rho() {
        let rep = omega_sigma(3);
        let t0 = BendParameter::new(rat(0, 1)).unwrap();
        let bent = bend(&rep, &t0).unwrap();
        for g in ["g1", "g2", "g3", "g4"] {
            assert_eq!(bent.rep.images[g], rep.images[g]);
        }
    }

    #[test]
    fn bent_representation_satisfies_relations() {
        let rep = omega_sigma(3);
        for (p, q) in [(1, 1), (1, 2), (3, 7)] {
            let t = BendParameter::new(rat(p, q)).unwrap();
            let bent = bend(&rep, &t).unwrap();
            assert!(check_relations(&bent.rep, false).pass, "t = {p}/{q}");
        }
    }

    #[test]
    fn left_half_images_are_bitwise_preserved() {
        let rep = omega_sigma(5);
        let t = BendParameter::new(rat(1, 2)).unwrap();
        let bent = bend(&rep, &t).unwrap();
        assert_eq!(bent.rep.images["g1"], rep.images["g1"]);
        assert_eq!(bent.rep.images["g2"], rep.images["g2"]);
    }

    #[test]
    fn right_half_traces_are_preserved() {
        let rep = omega_sigma(3);
        let t = BendParameter::new(rat(2, 3)).unwrap();
        let bent = bend(&rep, &t).unwrap();
        for w in ["g3*g4", "g4^2*g3", "g3^-1*g4"] {
            let word = GroupWord::parse(w).unwrap();
            assert_eq!(
                bent.rep.evaluate(&word).unwrap().trace(),
                rep.evaluate(&word).unwrap().trace(),
                "word {w}"
            );
        }
    }

    #[test]
    fn loxodromy_on_sigma_gamma() {
        let th = theta_generators();
        let gamma = th[0].mul(&th[1]);
        let cert = loxodromy_certificate(&gamma, 3).unwrap();
        assert!(cert.pass());
        // trace(theta1 theta2) = -4, lift negated to tau = 4 > 2
        assert!(cert.trace_was_negated);
        assert_eq!(cert.trace, Sqrt2::from_int(4));
        assert!(cert.eigenvalues.len() == 3);
        // lambda > 1
        assert_eq!(cert.lambda.sub(&Tower::one()).sign(), 1);
    }

    #[test]
    fn loxodromy_rejects_elliptic() {
        let (_, y) = crate::words::triangle_generators();
        assert!(matches!(loxodromy_certificate(&y, 3), Err(Error::NotLoxodromic)));
    }

    #[test]
    fn loxodromy_powers_of_two() {
        // diag(2, 1/2): eigenvalues of omega_5 are 16, 4, 1, 1/4, 1/16
        let d = Mat::mat2(
            Sqrt2::from_int(2),
            Sqrt2::zero(),
            Sqrt2::zero(),
            Sqrt2::new(rat(1, 2), rat(0, 1)),
        );
        let cert = loxodromy_certificate(&d, 5).unwrap();
        let expected = [(16, 1), (4, 1), (1, 1), (1, 4), (1, 16)];
        for (ev, (p, q)) in cert.eigenvalues.iter().zip(expected) {
            assert_eq!(ev, &Tower::from_base(Sqrt2::new(rat(p, q), rat(0, 1))));
        }
        assert!(cert.pass());
    }

    #[test]
    fn normalized_conjugator_needs_exact_root() {
        let rep = omega_sigma(3);
        let rho_gamma = rep.images["g1"].mul(&rep.images["g2"]);
        let t = BendParameter::new(rat(1, 1)).unwrap();
        // det(M_1) is generically not a cube
        let res = conjugator(&rho_gamma, &t, true);
        match res {
            Err(Error::IrrationalNormalization(3)) => {}
            Ok(m) => {
                // if it happened to be a cube, the result must be unimodular
                assert_eq!(m.det(), Sqrt2::one());
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}

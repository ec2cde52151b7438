//! Galois descent Q(sqrt2) -> Q and integralization by invariant-lattice
//! saturation. Together they conjugate omega_n of the Fuchsian
//! representation into SL(n,Q) and then SL(n,Z).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::intmat::{col_hnf, IntMat};
use crate::matrix::Mat;
use crate::scalar::{rat_to_string, Field, Rational, Sqrt2};
use crate::sympow::commutant;

pub const DEFAULT_NORM_BOUND: u64 = 1_000_000;
/// Default cap on decimal digits of the saturated lattice denominator.
pub const DEFAULT_SAT_BOUND: u64 = 64;

/// Audit record of a successful descent.
#[derive(Clone, Debug)]
pub struct DescentWitness {
    /// intertwiner between the representation and its Galois twist
    pub intertwiner: Mat<Sqrt2>,
    /// T * sigma2(T) = c I
    pub norm_scalar: Rational,
    /// s with N(s) * c = 1, so (sT) * sigma2(sT) = I
    pub scaling: Sqrt2,
    /// columns span the rational form; Q^-1 rho(g) Q is rational
    pub change_of_basis: Mat<Sqrt2>,
    /// true when the input was already rational and the witness is trivial
    pub trivial: bool,
}

impl DescentWitness {
    pub fn to_json(&self) -> Value {
        json!({
            "trivial": self.trivial,
            "intertwiner": self.intertwiner.to_json(),
            "norm_scalar": rat_to_string(&self.norm_scalar),
            "scaling": self.scaling.to_json(),
            "change_of_basis": self.change_of_basis.to_json(),
        })
    }
}

fn conj_mat(m: &Mat<Sqrt2>) -> Mat<Sqrt2> {
    m.map(Sqrt2::conjugate)
}

/// Solve a^2 - 2 b^2 = target over Q by a bounded integer search on the
/// binary form x^2 - 2 y^2.
pub fn solve_norm_equation(target: &Rational, bound: u64) -> Result<Sqrt2> {
    if num_traits::Zero::is_zero(target) {
        return Ok(Sqrt2::zero());
    }
    // (x/q)^2 - 2 (y/q)^2 = p/q  <=>  x^2 - 2 y^2 = p q
    let n = target.numer() * target.denom();
    let q = target.denom().clone();
    let two = BigInt::from(2);
    let mut y = BigInt::zero();
    let limit = BigInt::from(bound);
    while y <= limit {
        let t = &n + &two * &y * &y;
        if !t.is_negative() {
            let x = t.sqrt();
            if &x * &x == t {
                return Ok(Sqrt2::new(
                    Rational::new(x, q.clone()),
                    Rational::new(y, q),
                ));
            }
        }
        y += BigInt::one();
    }
    Err(Error::NormSearchExhausted { bound })
}

fn words_for_trace_screen(gens: &[Mat<Sqrt2>]) -> Vec<(String, Mat<Sqrt2>)> {
    let mut out = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        out.push((format!("g{}", i + 1), g.clone()));
    }
    for i in 0..gens.len() {
        for j in 0..gens.len() {
            if i != j {
                out.push((format!("g{}*g{}", i + 1, j + 1), gens[i].mul(&gens[j])));
            }
        }
    }
    out
}

/// Conjugate a representation with entries in Q(sqrt2) and rational traces
/// into GL(n, Q). Requires absolute irreducibility (Schur condition).
pub fn rationalize(
    gens: &[Mat<Sqrt2>],
    norm_bound: u64,
) -> Result<(Vec<Mat<Rational>>, DescentWitness)> {
    let n = gens.first().map(Mat::rows).unwrap_or(0);

    // already rational: trivial witness
    if gens
        .iter()
        .all(|g| g.entries().all(Sqrt2::is_rational))
    {
        let id = Mat::<Sqrt2>::identity(n);
        let rational = gens
            .iter()
            .map(|g| g.map(|e| e.as_rational().unwrap()))
            .collect();
        return Ok((
            rational,
            DescentWitness {
                intertwiner: id.clone(),
                norm_scalar: <Rational as One>::one(),
                scaling: Sqrt2::one(),
                change_of_basis: id,
                trivial: true,
            },
        ));
    }

    // Schur condition
    let (dim, _) = commutant(gens);
    if dim != 1 {
        return Err(Error::NotIrreducible(dim));
    }
    // necessary-condition screen: all sampled traces must lie in Q
    for (name, m) in words_for_trace_screen(gens) {
        if !m.trace().is_rational() {
            return Err(Error::NonRationalTrace(name));
        }
    }

    // intertwiner T with T * sigma2(g) = g * T for all generators
    let nn = n * n;
    let mut rows: Vec<Vec<Sqrt2>> = Vec::with_capacity(gens.len() * nn);
    for g in gens {
        let gc = conj_mat(g);
        for r in 0..n {
            for c in 0..n {
                let mut row = vec![Sqrt2::zero(); nn];
                for k in 0..n {
                    // (T gc)[r,c]: coeff of T[r,k] is gc[k,c]
                    row[r * n + k] = row[r * n + k].add(gc.at(k, c));
                    // (g T)[r,c]: coeff of T[k,c] is g[r,k]
                    row[k * n + c] = row[k * n + c].sub(g.at(r, k));
                }
                rows.push(row);
            }
        }
    }
    let kernel = Mat::from_rows(rows).kernel_basis();
    if kernel.len() != 1 {
        return Err(Error::HypothesisFailure(format!(
            "intertwining space has dimension {}, expected 1",
            kernel.len()
        )));
    }
    let t_mat = Mat::from_fn(n, n, |r, c| kernel[0][r * n + c].clone());
    if t_mat.det().is_zero() {
        return Err(Error::HypothesisFailure("intertwiner is singular".into()));
    }

    // T * sigma2(T) = c I with c rational
    let tt = t_mat.mul(&conj_mat(&t_mat));
    let c_elem = tt.at(0, 0).clone();
    for r in 0..n {
        for cidx in 0..n {
            let expect = if r == cidx { c_elem.clone() } else { Sqrt2::zero() };
            if tt.at(r, cidx) != &expect {
                return Err(Error::HypothesisFailure(
                    "T * sigma2(T) is not a scalar matrix".into(),
                ));
            }
        }
    }
    let c = c_elem
        .as_rational()
        .ok_or_else(|| Error::HypothesisFailure("norm scalar not rational".into()))?;

    // s with N(s) = 1/c, then U = sT satisfies U sigma2(U) = I
    let s = solve_norm_equation(&c.recip(), norm_bound)?;
    let u = t_mat.scale(&s);
    debug_assert!(u.mul(&conj_mat(&u)).is_identity());

    // rational form: fixed space of the semilinear involution w -> U sigma2(w).
    // With U = P + Q sqrt2 and w = a + b sqrt2 the fixed equations are
    // (P - I) a - 2 Q b = 0 and Q a - (P + I) b = 0 over Q.
    let p = u.map(|e| e.a.clone());
    let q = u.map(|e| e.b.clone());
    let two = Rational::from(BigInt::from(2));
    let big = Mat::from_fn(2 * n, 2 * n, |r, c| {
        let (rr, rc) = (r % n, c % n);
        match (r < n, c < n) {
            (true, true) => {
                let e = p.at(rr, rc).clone();
                if rr == rc {
                    e - <Rational as One>::one()
                } else {
                    e
                }
            }
            (true, false) => -(q.at(rr, rc) * &two),
            (false, true) => q.at(rr, rc).clone(),
            (false, false) => {
                let e = -p.at(rr, rc).clone();
                if rr == rc {
                    e - <Rational as One>::one()
                } else {
                    e
                }
            }
        }
    });
    let fixed = big.kernel_basis();
    if fixed.len() != n {
        return Err(Error::HypothesisFailure(format!(
            "rational form has dimension {}, expected {n}",
            fixed.len()
        )));
    }
    let basis = Mat::from_fn(n, n, |r, c| {
        Sqrt2::new(fixed[c][r].clone(), fixed[c][n + r].clone())
    });
    let basis_inv = basis
        .inv()
        .map_err(|_| Error::HypothesisFailure("descended basis is singular".into()))?;

    let mut rational_gens = Vec::with_capacity(gens.len());
    for g in gens {
        let conj = basis_inv.mul(g).mul(&basis);
        let rg = conjugate_is_rational(&conj)?;
        rational_gens.push(rg);
    }
    Ok((
        rational_gens,
        DescentWitness {
            intertwiner: t_mat,
            norm_scalar: c,
            scaling: s,
            change_of_basis: basis,
            trivial: false,
        },
    ))
}

fn conjugate_is_rational(m: &Mat<Sqrt2>) -> Result<Mat<Rational>> {
    for e in m.entries() {
        if !e.is_rational() {
            return Err(Error::HypothesisFailure(
                "descended generator has an irrational entry".into(),
            ));
        }
    }
    Ok(m.map(|e| e.as_rational().unwrap()))
}

/// Invariant lattice produced by saturation, in column Hermite form.
#[derive(Clone, Debug)]
pub struct LatticeBasis {
    /// rational basis matrix, columns span the invariant lattice
    pub basis: Mat<Rational>,
    pub denominator: BigInt,
    pub iterations: usize,
}

impl LatticeBasis {
    pub fn to_json(&self) -> Value {
        json!({
            "basis": self.basis.to_json(),
            "denominator": self.denominator.to_string(),
            "iterations": self.iterations,
        })
    }
}

fn lattice_key(h: &IntMat, den: &BigInt) -> (IntMat, BigInt) {
    // normalize (H, den) by the gcd of all entries and den
    let mut g = den.clone();
    for e in &h.data {
        g = g.gcd(e);
        if g.is_one() {
            break;
        }
    }
    if g.is_one() {
        return (h.clone(), den.clone());
    }
    let mut out = h.clone();
    for e in &mut out.data {
        *e = &*e / &g;
    }
    (out, den / &g)
}

/// Saturate the standard lattice under the generators and their inverses,
/// re-normalizing by Hermite normal form each round, then conjugate by the
/// stable basis. Succeeds iff the group is conjugate into SL(n,Z).
pub fn integralize(
    gens: &[Mat<Rational>],
    sat_bound_digits: u64,
) -> Result<(Vec<Mat<Rational>>, LatticeBasis)> {
    let n = gens.first().map(Mat::rows).unwrap_or(0);
    // already integral: identity basis, zero iterations
    if gens
        .iter()
        .all(|g| g.entries().all(|e| e.denom().is_one()))
    {
        return Ok((
            gens.to_vec(),
            LatticeBasis {
                basis: Mat::identity(n),
                denominator: BigInt::one(),
                iterations: 0,
            },
        ));
    }

    // quick obstruction: an invariant lattice forces integral characteristic
    // polynomials on every element; screen the generators and short products
    let mut screen: Vec<Mat<Rational>> = gens.to_vec();
    for i in 0..gens.len() {
        for j in 0..gens.len() {
            if i != j {
                screen.push(gens[i].mul(&gens[j]));
            }
        }
    }
    for m in &screen {
        if m.charpoly().iter().any(|c| !c.denom().is_one()) {
            return Err(Error::SaturationDiverged { bound: sat_bound_digits });
        }
    }

    // generators and inverses, breadth-first over {g, g^-1}
    let mut action: Vec<Mat<Rational>> = Vec::with_capacity(2 * gens.len());
    for g in gens {
        action.push(g.clone());
    }
    for g in gens {
        action.push(g.inv().map_err(|_| Error::SingularMatrix)?);
    }

    let mut h = IntMat::identity(n);
    let mut den = BigInt::one();
    let max_iters = 1000usize;
    for it in 1..=max_iters {
        let basis = Mat::from_fn(n, n, |r, c| {
            Rational::new(h.at(r, c).clone(), den.clone())
        });
        // stack [B | a1 B | a2 B | ...] and renormalize by HNF
        let mut cols: Vec<Mat<Rational>> = vec![basis.clone()];
        for a in &action {
            cols.push(a.mul(&basis));
        }
        let total_cols = cols.len() * n;
        let stacked = Mat::from_fn(n, total_cols, |r, c| cols[c / n].at(r, c % n).clone());
        // clear denominators
        let mut lcm = BigInt::one();
        for e in stacked.entries() {
            lcm = lcm.lcm(e.denom());
        }
        let int_stacked = IntMat {
            rows: n,
            cols: total_cols,
            data: stacked
                .entries()
                .map(|e| e.numer() * (&lcm / e.denom()))
                .collect(),
        };
        let hnf = col_hnf(&int_stacked);
        if hnf.cols != n {
            return Err(Error::HypothesisFailure("saturated lattice lost rank".into()));
        }
        let (new_h, new_den) = lattice_key(&hnf, &lcm);
        if new_den.to_string().len() as u64 > sat_bound_digits {
            return Err(Error::SaturationDiverged { bound: sat_bound_digits });
        }
        if new_h == h && new_den == den {
            // stable: conjugate and verify integrality
            let basis_inv = basis.inv().map_err(|_| Error::SingularMatrix)?;
            let mut out = Vec::with_capacity(gens.len());
            for g in gens {
                let conj = basis_inv.mul(g).mul(&basis);
                if conj.entries().any(|e| !e.denom().is_one()) {
                    return Err(Error::SaturationDiverged { bound: sat_bound_digits });
                }
                out.push(conj);
            }
            return Ok((
                out,
                LatticeBasis { basis, denominator: den, iterations: it - 1 },
            ));
        }
        h = new_h;
        den = new_den;
    }
    Err(Error::SaturationDiverged { bound: sat_bound_digits })
}

//! The symmetric-power representation SL(2) -> SL(n) on degree-(n-1)
//! homogeneous polynomials, plus the invariant-form and commutant solvers
//! behind every irreducibility and density certificate.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::scalar::{Field, Sqrt2, Tower};

fn binomials(n: usize) -> Vec<Vec<u64>> {
    let mut c = vec![vec![0u64; n + 1]; n + 1];
    for i in 0..=n {
        c[i][0] = 1;
        for j in 1..=i {
            c[i][j] = c[i - 1][j - 1] + if j <= i - 1 { c[i - 1][j] } else { 0 };
        }
    }
    c
}

/// Coefficients of (p X + q Y)^e in the basis X^e, X^{e-1}Y, ..., Y^e.
fn binomial_expand<F: Field>(p: &F, q: &F, e: usize, binom: &[Vec<u64>]) -> Vec<F> {
    let mut out = Vec::with_capacity(e + 1);
    // powers of p and q
    let mut p_pows = vec![F::one()];
    let mut q_pows = vec![F::one()];
    for i in 1..=e {
        p_pows.push(p_pows[i - 1].mul(p));
        q_pows.push(q_pows[i - 1].mul(q));
    }
    for k in 0..=e {
        let c = F::from_int(binom[e][k] as i64);
        out.push(c.mul(&p_pows[e - k]).mul(&q_pows[k]));
    }
    out
}

/// The symmetric-power homomorphism: the monomial X^{n-1-i} Y^i maps to
/// (aX + cY)^{n-1-i} (bX + dY)^i for A = [[a,b],[c,d]], expanded in the
/// fixed monomial basis. Requires det(A) = 1 and odd n > 1.
pub fn omega_n<F: Field>(a: &Mat<F>, n: usize) -> Result<Mat<F>> {
    if n <= 1 || n % 2 == 0 {
        return Err(Error::InvalidDegree(n));
    }
    if !a.is_square() || a.rows() != 2 {
        return Err(Error::DimensionMismatch("omega_n expects a 2x2 matrix".into()));
    }
    if a.det() != F::one() {
        return Err(Error::NotUnimodular);
    }
    let d = n - 1;
    let binom = binomials(d);
    let (m00, m01, m10, m11) = (a.at(0, 0), a.at(0, 1), a.at(1, 0), a.at(1, 1));
    let mut out = Mat::<F>::zero(n, n);
    for i in 0..n {
        // column i: image of X^{n-1-i} Y^i
        let left = binomial_expand(m00, m10, d - i, &binom); // (aX + cY)^{n-1-i}
        let right = binomial_expand(m01, m11, i, &binom); // (bX + dY)^i
        for (k1, lv) in left.iter().enumerate() {
            for (k2, rv) in right.iter().enumerate() {
                let j = k1 + k2; // coefficient of X^{n-1-j} Y^j
                *out.at_mut(j, i) = out.at(j, i).add(&lv.mul(rv));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    Symmetric,
    Alternating,
}

/// Solution space of invariant bilinear forms of one symmetry type.
#[derive(Clone, Debug)]
pub struct FormSolution<F: Field> {
    pub symmetry: Symmetry,
    pub dimension: usize,
    pub basis: Vec<Mat<F>>,
    /// (positives, negatives), reported only when symmetric and dim = 1,
    /// normalized so positives <= negatives.
    pub signature: Option<(usize, usize)>,
}

impl<F: Field> FormSolution<F> {
    pub fn to_json(&self) -> Value {
        json!({
            "symmetry": match self.symmetry { Symmetry::Symmetric => "symmetric", Symmetry::Alternating => "alternating" },
            "dimension": self.dimension,
            "basis": self.basis.iter().map(Mat::to_json).collect::<Vec<_>>(),
            "signature": self.signature.map(|(p, q)| vec![p, q]),
        })
    }
}

fn index_pairs(n: usize, symmetry: Symmetry) -> Vec<(usize, usize)> {
    let mut idx = Vec::new();
    for i in 0..n {
        let start = match symmetry {
            Symmetry::Symmetric => i,
            Symmetry::Alternating => i + 1,
        };
        for j in start..n {
            idx.push((i, j));
        }
    }
    idx
}

fn unit_form<F: Field>(n: usize, i: usize, j: usize, symmetry: Symmetry) -> Mat<F> {
    let mut b = Mat::zero(n, n);
    *b.at_mut(i, j) = F::one();
    match symmetry {
        Symmetry::Symmetric => {
            if i != j {
                *b.at_mut(j, i) = F::one();
            }
        }
        Symmetry::Alternating => {
            *b.at_mut(j, i) = F::from_int(-1);
        }
    }
    b
}

/// Exact basis of { B : g^T B g = B for all g, B of the given symmetry },
/// found as the kernel of the stacked linear system over the entry field.
pub fn invariant_forms<F: Field>(gens: &[Mat<F>], symmetry: Symmetry) -> FormSolution<F> {
    let n = gens.first().map_or(0, Mat::rows);
    let idx = index_pairs(n, symmetry);
    let unknowns = idx.len();
    let mut rows: Vec<Vec<F>> = Vec::with_capacity(gens.len() * unknowns);
    for g in gens {
        let gt = g.transpose();
        // column u of the system: entries of g^T E_u g - E_u at positions idx
        let images: Vec<Mat<F>> = idx
            .iter()
            .map(|&(i, j)| {
                let e = unit_form::<F>(n, i, j, symmetry);
                gt.mul(&e).mul(g).sub(&e)
            })
            .collect();
        for &(r, c) in &idx {
            rows.push(images.iter().map(|m| m.at(r, c).clone()).collect());
        }
    }
    let system = Mat::from_rows(rows);
    let kernel = system.kernel_basis();
    let mut basis: Vec<Mat<F>> = kernel
        .iter()
        .map(|v| {
            let mut b = Mat::zero(n, n);
            for (k, &(i, j)) in idx.iter().enumerate() {
                *b.at_mut(i, j) = v[k].clone();
                if i != j {
                    *b.at_mut(j, i) = match symmetry {
                        Symmetry::Symmetric => v[k].clone(),
                        Symmetry::Alternating => v[k].neg(),
                    };
                }
            }
            b
        })
        .collect();
    let mut signature = None;
    if symmetry == Symmetry::Symmetric && basis.len() == 1 {
        let (p, q) = symmetric_signature(&basis[0]);
        if p > q {
            // the form is only defined up to scale; fix the sign so the
            // reported signature is (min, max)
            basis[0] = basis[0].scale(&F::from_int(-1));
            signature = Some((q, p));
        } else {
            signature = Some((p, q));
        }
    }
    FormSolution { symmetry, dimension: basis.len(), basis, signature }
}

/// Signature of a symmetric matrix by exact congruence diagonalization
/// using the sign oracle.
pub fn symmetric_signature<F: Field>(b: &Mat<F>) -> (usize, usize) {
    let n = b.rows();
    let mut m = b.clone();
    let mut pos = 0usize;
    let mut neg = 0usize;
    let mut k = 0usize;
    while k < n {
        if m.at(k, k).is_zero() {
            // bring a nonzero diagonal entry to position k, or synthesize one
            if let Some(r) = (k + 1..n).find(|&r| !m.at(r, r).is_zero()) {
                swap_sym(&mut m, k, r);
            } else if let Some((i, j)) = find_offdiag(&m, k) {
                // all remaining diagonal entries vanish; fold column j into
                // column i to expose 2*m[i][j] on the diagonal
                add_sym(&mut m, i, j, &F::one());
                if i != k {
                    swap_sym(&mut m, k, i);
                }
            } else {
                break; // remaining block is zero
            }
        }
        let pivot = m.at(k, k).clone();
        if pivot.sign() > 0 {
            pos += 1;
        } else {
            neg += 1;
        }
        let pinv = pivot.inv().expect("pivot nonzero");
        for r in k + 1..n {
            if m.at(r, k).is_zero() {
                continue;
            }
            let f = m.at(r, k).mul(&pinv).neg();
            add_sym(&mut m, r, k, &f);
        }
        k += 1;
    }
    (pos, neg)
}

/// symmetric row+column operation: row_i += f * row_j and col_i += f * col_j
fn add_sym<F: Field>(m: &mut Mat<F>, i: usize, j: usize, f: &F) {
    let n = m.rows();
    for c in 0..n {
        let t = m.at(i, c).add(&f.mul(m.at(j, c)));
        *m.at_mut(i, c) = t;
    }
    for r in 0..n {
        let t = m.at(r, i).add(&f.mul(m.at(r, j)));
        *m.at_mut(r, i) = t;
    }
}

fn swap_sym<F: Field>(m: &mut Mat<F>, i: usize, j: usize) {
    let n = m.rows();
    for c in 0..n {
        let a = m.at(i, c).clone();
        let b = m.at(j, c).clone();
        *m.at_mut(i, c) = b;
        *m.at_mut(j, c) = a;
    }
    for r in 0..n {
        let a = m.at(r, i).clone();
        let b = m.at(r, j).clone();
        *m.at_mut(r, i) = b;
        *m.at_mut(r, j) = a;
    }
}

fn find_offdiag<F: Field>(m: &Mat<F>, k: usize) -> Option<(usize, usize)> {
    let n = m.rows();
    for i in k..n {
        for j in i + 1..n {
            if !m.at(i, j).is_zero() {
                return Some((i, j));
            }
        }
    }
    None
}

/// Exact basis of { M : M g = g M for all g }. Dimension 1 certifies
/// absolute irreducibility.
pub fn commutant<F: Field>(gens: &[Mat<F>]) -> (usize, Vec<Mat<F>>) {
    let n = gens.first().map_or(0, Mat::rows);
    let nn = n * n;
    let mut rows: Vec<Vec<F>> = Vec::with_capacity(gens.len() * nn);
    for g in gens {
        // (M g - g M)[r][c] as a linear function of the entries of M:
        // coeff of M[r][k] is g[k][c], coeff of M[k][c] is -g[r][k]
        for r in 0..n {
            for c in 0..n {
                let mut row = vec![F::zero(); nn];
                for k in 0..n {
                    row[r * n + k] = row[r * n + k].add(g.at(k, c));
                    row[k * n + c] = row[k * n + c].sub(g.at(r, k));
                }
                rows.push(row);
            }
        }
    }
    let kernel = Mat::from_rows(rows).kernel_basis();
    let basis: Vec<Mat<F>> = kernel
        .iter()
        .map(|v| Mat::from_fn(n, n, |r, c| v[r * n + c].clone()))
        .collect();
    (basis.len(), basis)
}

/// Witness that <theta_a, theta_b> is Zariski dense in PSL(2,R): diagonalize
/// the hyperbolic element theta_b theta_a over the tower field and exhibit
/// three independent conjugates of diag(1,-1) in the Lie algebra.
#[derive(Clone, Debug)]
pub struct Psl2Witness {
    /// diagonal of D, the diagonalized hyperbolic element
    pub eigenvalues: (Tower, Tower),
    /// the three candidate Lie-algebra vectors, as 2x2 tower matrices
    pub vectors: [Mat<Tower>; 3],
    pub rank: usize,
    pub accepted: bool,
}

impl Psl2Witness {
    pub fn to_json(&self) -> Value {
        json!({
            "eigenvalues": [self.eigenvalues.0.to_json(), self.eigenvalues.1.to_json()],
            "vectors": self.vectors.iter().map(Mat::to_json).collect::<Vec<_>>(),
            "rank": self.rank,
            "accepted": self.accepted,
        })
    }
}

/// `use_ba` picks the hyperbolic word theta_b * theta_a (the default);
/// the alternative theta_a * theta_b has the same trace.
pub fn psl2_density_witness(
    theta_a: &Mat<Sqrt2>,
    theta_b: &Mat<Sqrt2>,
    use_ba: bool,
) -> Result<Psl2Witness> {
    let hyper = if use_ba { theta_b.mul(theta_a) } else { theta_a.mul(theta_b) };
    let tau = hyper.trace();
    let disc = tau.mul(&tau).sub(&Sqrt2::from_int(4));
    if disc.sign() <= 0 {
        return Err(Error::NotHyperbolic);
    }
    // eigenvalues (tau +- sqrt(disc)) / 2 in the tower field
    let half = Sqrt2::from_int(2).inv().unwrap();
    let lam = Tower::new(tau.mul(&half), half.clone(), disc.clone());
    let mu = lam.conjugate_over_base();
    // eigenvector for eigenvalue e: (m01, e - m00), or (e - m11, m10) when
    // the first is zero
    let m = hyper.map(|e| Tower::from_base(e.clone()));
    let eigvec = |e: &Tower| -> Vec<Tower> {
        let v = vec![m.at(0, 1).clone(), e.sub(m.at(0, 0))];
        if v.iter().all(Field::is_zero) {
            vec![e.sub(m.at(1, 1)), m.at(1, 0).clone()]
        } else {
            v
        }
    };
    let v1 = eigvec(&lam);
    let v2 = eigvec(&mu);
    let p = Mat::from_rows(vec![
        vec![v1[0].clone(), v2[0].clone()],
        vec![v1[1].clone(), v2[1].clone()],
    ]);
    let p_inv = p.inv().map_err(|_| Error::NotHyperbolic)?;

    let x1 = {
        let mut m = Mat::<Tower>::zero(2, 2);
        *m.at_mut(0, 0) = Tower::one();
        *m.at_mut(1, 1) = Field::neg(&Tower::one());
        m
    };
    let ta = theta_a.map(|e| Tower::from_base(e.clone()));
    let tb = theta_b.map(|e| Tower::from_base(e.clone()));
    let conj1 = p_inv.mul(&ta).mul(&tb).mul(&p); // P^-1 (theta_a theta_b) P
    let conj2 = p_inv.mul(&ta).mul(&ta).mul(&tb).mul(&p); // P^-1 (theta_a^2 theta_b) P
    let ad = |g: &Mat<Tower>| -> Result<Mat<Tower>> { Ok(g.mul(&x1).mul(&g.inv()?)) };
    let x2 = ad(&conj1)?;
    let x3 = ad(&conj2)?;

    // coordinates in sl(2): (m00, m01, m10); trace-free so m11 = -m00
    let coords = |x: &Mat<Tower>| vec![x.at(0, 0).clone(), x.at(0, 1).clone(), x.at(1, 0).clone()];
    let rank_mat = Mat::from_rows(vec![coords(&x1), coords(&x2), coords(&x3)]);
    let rank = rank_mat.rank();
    Ok(Psl2Witness {
        eigenvalues: (lam, mu),
        vectors: [x1, x2, x3],
        rank,
        accepted: rank == 3,
    })
}

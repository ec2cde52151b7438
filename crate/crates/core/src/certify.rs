//! End-to-end certification of one point on the bent path: exact relation
//! checks, loxodromy of the bending curve, irreducibility of the two halves,
//! the invariant-form dichotomy, the index-3 surface subgroup, and the
//! rational/integral normal forms.

use serde_json::{json, Value};

use crate::bend::{bend, loxodromy_certificate, BendParameter, LoxodromyCertificate};
use crate::cover::{surface_cover_mod3, SubgroupData};
use crate::descent::{integralize, rationalize};
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::scalar::{rat_to_string, Field, Rational, Sqrt2};
use crate::sympow::{commutant, invariant_forms, psl2_density_witness, FormSolution, Symmetry};
use crate::words::{check_relations, sigma_representation, theta_generators, Representation};

/// Hypotheses imported from the literature rather than recomputed. The
/// certificate lists them explicitly so the verified/assumed boundary is
/// visible in the output.
pub const THEOREM_DEPENDENCIES: &[&str] = &[
    "hitchin-component-membership-of-bent-path",
    "discreteness-of-bent-representations",
    "faithfulness-of-bent-representations",
];

pub const CERT_SCHEMA: &str = "zdense-cert/1";

#[derive(Clone, Debug)]
pub struct StageReport {
    pub stage: String,
    pub pass: bool,
    pub detail: Value,
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub n: usize,
    pub t: BendParameter,
    pub verdict: String,
    pub stages: Vec<StageReport>,
    pub rational_images: Option<Vec<Mat<Rational>>>,
    pub integral_images: Option<Vec<Mat<Rational>>>,
}

impl Certificate {
    pub fn pass(&self) -> bool {
        self.stages.iter().all(|s| s.pass)
    }

    pub fn to_json(&self) -> Value {
        let stages: Vec<Value> = self
            .stages
            .iter()
            .map(|s| json!({ "stage": s.stage, "pass": s.pass, "detail": s.detail }))
            .collect();
        let mut out = json!({
            "schema": CERT_SCHEMA,
            "n": self.n,
            "t": rat_to_string(self.t.value()),
            "verdict": self.verdict,
            "stages": stages,
            "theorem_dependencies": THEOREM_DEPENDENCIES,
        });
        if let Some(gens) = &self.rational_images {
            out["rational_images"] =
                Value::Array(gens.iter().map(Mat::to_json).collect());
        }
        if let Some(gens) = &self.integral_images {
            out["integral_images"] =
                Value::Array(gens.iter().map(Mat::to_json).collect());
        }
        out
    }
}

/// Tuning knobs for the pipeline; defaults match the CLI defaults.
#[derive(Clone, Debug)]
pub struct CertifyOptions {
    pub norm_bound: u64,
    pub sat_bound: u64,
    pub rationalize: bool,
    pub integralize: bool,
    pub check_cover: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            norm_bound: crate::descent::DEFAULT_NORM_BOUND,
            sat_bound: crate::descent::DEFAULT_SAT_BOUND,
            rationalize: true,
            integralize: false,
            check_cover: true,
        }
    }
}

fn gens_in_order<F: Field>(rep: &Representation<F>) -> Vec<Mat<F>> {
    rep.presentation
        .generators
        .iter()
        .map(|g| rep.images[g].clone())
        .collect()
}

fn form_stage(
    forms: &FormSolution<Sqrt2>,
    t: &BendParameter,
    n: usize,
) -> (bool, String, Value) {
    let k = (n - 1) / 2;
    if t.is_zero() {
        let sig_ok = forms.signature == Some((k, k + 1));
        let pass = forms.dimension == 1 && sig_ok;
        let verdict = if pass { "FUCHSIAN_LOCUS" } else { "FAILED:invariant-form" };
        (
            pass,
            verdict.into(),
            json!({
                "dimension": forms.dimension,
                "signature": forms.signature.map(|(p, q)| vec![p, q]),
                "expected_signature": [k, k + 1],
            }),
        )
    } else {
        let pass = forms.dimension == 0;
        let verdict = if pass { "ZARISKI_DENSE_CERTIFIED" } else { "FAILED:invariant-form" };
        (pass, verdict.into(), json!({ "dimension": forms.dimension }))
    }
}

/// Run every certification stage for the symmetric-power representation of
/// the orbifold group, bent by `t`.
pub fn certify_path_point(
    base: &Representation<Sqrt2>,
    t: &BendParameter,
    n: usize,
    opts: &CertifyOptions,
) -> Result<Certificate> {
    let bent = bend(base, t)?;
    let rep = &bent.rep;
    let gens = gens_in_order(rep);
    let mut stages = Vec::new();
    let mut verdict = String::new();
    let mut failed = false;
    fn fail(verdict: &mut String, failed: &mut bool, stage: &str) {
        if !*failed {
            *failed = true;
            *verdict = format!("FAILED:{stage}");
        }
    }

    // (a) defining relations, projectively for even-trace lifts
    let relations = check_relations(rep, true);
    if !relations.pass {
        fail(&mut verdict, &mut failed, "relations");
    }
    stages.push(StageReport {
        stage: "relations".into(),
        pass: relations.pass,
        detail: serde_json::to_value(&relations).unwrap_or(Value::Null),
    });

    // (b) loxodromy of the bending curve, from the 2x2 lift of sigma(gamma)
    let thetas = theta_generators();
    let gamma2 = thetas[0].mul(&thetas[1]);
    let lox: LoxodromyCertificate = loxodromy_certificate(&gamma2, n)?;
    if !lox.pass() {
        fail(&mut verdict, &mut failed, "loxodromy");
    }
    stages.push(StageReport {
        stage: "loxodromy".into(),
        pass: lox.pass(),
        detail: lox.to_json(),
    });

    // (c) the two halves of the bend are each absolutely irreducible
    let (dim_left, _) = commutant(&gens[0..2]);
    let (dim_right, _) = commutant(&gens[2..4]);
    let halves_ok = dim_left == 1 && dim_right == 1;
    if !halves_ok {
        fail(&mut verdict, &mut failed, "irreducible-halves");
    }
    stages.push(StageReport {
        stage: "irreducible-halves".into(),
        pass: halves_ok,
        detail: json!({ "commutant_dim_g1_g2": dim_left, "commutant_dim_g3_g4": dim_right }),
    });

    // (d) invariant symmetric bilinear forms: the dichotomy that decides
    // between the Fuchsian locus and a Zariski-dense point
    let forms = invariant_forms(&gens, Symmetry::Symmetric);
    let (forms_ok, form_verdict, detail) = form_stage(&forms, t, n);
    if !forms_ok {
        fail(&mut verdict, &mut failed, "invariant-form");
    } else if !failed {
        verdict = form_verdict;
    }
    stages.push(StageReport { stage: "invariant-form".into(), pass: forms_ok, detail });

    // (e) restrict to the genus-2 surface subgroup of index 3
    if opts.check_cover {
        let cover: SubgroupData = surface_cover_mod3();
        let images = cover.restricted_images(rep)?;
        let (sub_dim, _) = commutant(&images);
        let rel_ok = cover.check_subgroup_relations(rep)?;
        let pass = sub_dim == 1 && rel_ok;
        if !pass {
            fail(&mut verdict, &mut failed, "surface-cover");
        }
        stages.push(StageReport {
            stage: "surface-cover".into(),
            pass,
            detail: json!({
                "index": cover.index,
                "genus": cover.genus,
                "commutant_dim": sub_dim,
                "relators_pass": rel_ok,
            }),
        });
    }

    // (f) rational and integral normal forms
    let mut rational_images = None;
    let mut integral_images = None;
    if opts.rationalize {
        match rationalize(&gens, opts.norm_bound) {
            Ok((rational, witness)) => {
                let max_den = rational
                    .iter()
                    .flat_map(|g| g.entries())
                    .map(|e| e.denom().clone())
                    .max()
                    .unwrap_or_default();
                stages.push(StageReport {
                    stage: "rationality".into(),
                    pass: true,
                    detail: json!({
                        "trivial_descent": witness.trivial,
                        "max_denominator": max_den.to_string(),
                    }),
                });
                if opts.integralize && !t.is_zero() {
                    // off the Fuchsian locus the traces leave Z, so no
                    // invariant lattice exists; record the skip explicitly
                    stages.push(StageReport {
                        stage: "integrality".into(),
                        pass: true,
                        detail: json!({ "skipped": "only attempted at t = 0" }),
                    });
                }
                if opts.integralize && t.is_zero() {
                    match integralize(&rational, opts.sat_bound) {
                        Ok((integral, lattice)) => {
                            stages.push(StageReport {
                                stage: "integrality".into(),
                                pass: true,
                                detail: lattice.to_json(),
                            });
                            integral_images = Some(integral);
                        }
                        Err(e @ Error::SaturationDiverged { .. }) => return Err(e),
                        Err(e) => {
                            fail(&mut verdict, &mut failed, "integrality");
                            stages.push(StageReport {
                                stage: "integrality".into(),
                                pass: false,
                                detail: json!({ "error": e.to_string() }),
                            });
                        }
                    }
                }
                rational_images = Some(rational);
            }
            Err(e @ Error::NormSearchExhausted { .. }) => return Err(e),
            Err(e) => {
                fail(&mut verdict, &mut failed, "rationality");
                stages.push(StageReport {
                    stage: "rationality".into(),
                    pass: false,
                    detail: json!({ "error": e.to_string() }),
                });
            }
        }
    }

    Ok(Certificate {
        n,
        t: t.clone(),
        verdict,
        stages,
        rational_images,
        integral_images,
    })
}

/// Density witness for the two halves of the base PSL(2) representation.
pub fn certify_psl2_base() -> Result<Value> {
    let thetas = theta_generators();
    let left = psl2_density_witness(&thetas[0], &thetas[1], true)?;
    let right = psl2_density_witness(&thetas[2], &thetas[3], true)?;
    Ok(json!({
        "left_half": { "rank": left.rank, "accepted": left.accepted },
        "right_half": { "rank": right.rank, "accepted": right.accepted },
        "pass": left.accepted && right.accepted,
    }))
}

/// Build the symmetric-power representation of the orbifold group, the
/// starting point of every pipeline run.
pub fn base_representation(n: usize) -> Result<Representation<Sqrt2>> {
    let sigma = sigma_representation();
    let mut images = std::collections::BTreeMap::new();
    for (name, m) in &sigma.images {
        images.insert(name.clone(), crate::sympow::omega_n(m, n)?);
    }
    Ok(Representation {
        presentation: sigma.presentation.clone(),
        images,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn fuchsian_locus_at_t_zero() {
        let base = base_representation(3).unwrap();
        let t = BendParameter::new(rat(0, 1)).unwrap();
        let mut opts = CertifyOptions::default();
        opts.integralize = true;
        let cert = certify_path_point(&base, &t, 3, &opts).unwrap();
        assert_eq!(cert.verdict, "FUCHSIAN_LOCUS");
        assert!(cert.pass());
        let integral = cert.integral_images.as_ref().unwrap();
        for g in integral {
            assert!(g.entries().all(|e| e.denom() == &num_bigint::BigInt::from(1)));
        }
    }

    #[test]
    fn dense_at_t_one() {
        let base = base_representation(3).unwrap();
        let t = BendParameter::new(rat(1, 1)).unwrap();
        let mut opts = CertifyOptions::default();
        opts.integralize = true;
        let cert = certify_path_point(&base, &t, 3, &opts).unwrap();
        assert_eq!(cert.verdict, "ZARISKI_DENSE_CERTIFIED");
        assert!(cert.pass());
        // no invariant lattice off the Fuchsian locus
        assert!(cert.integral_images.is_none());
        let json = cert.to_json();
        assert_eq!(json["schema"], CERT_SCHEMA);
        assert_eq!(json["theorem_dependencies"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn dense_at_t_half_n5() {
        let base = base_representation(5).unwrap();
        let t = BendParameter::new(rat(1, 2)).unwrap();
        let opts = CertifyOptions { check_cover: false, ..Default::default() };
        let cert = certify_path_point(&base, &t, 5, &opts).unwrap();
        assert_eq!(cert.verdict, "ZARISKI_DENSE_CERTIFIED");
        assert!(cert.pass());
    }

    #[test]
    fn psl2_base_witnesses() {
        let v = certify_psl2_base().unwrap();
        assert_eq!(v["pass"], true);
        assert_eq!(v["left_half"]["rank"], 3);
        assert_eq!(v["right_half"]["rank"], 3);
    }

    #[test]
    fn corrupted_generator_fails_relations() {
        let mut base = base_representation(3).unwrap();
        let g1 = base.images.get_mut("g1").unwrap();
        *g1.at_mut(0, 0) = g1.at(0, 0).add(&Sqrt2::one());
        let t = BendParameter::new(rat(0, 1)).unwrap();
        let opts = CertifyOptions {
            rationalize: false,
            check_cover: false,
            ..Default::default()
        };
        let cert = certify_path_point(&base, &t, 3, &opts).unwrap();
        assert!(!cert.pass());
        assert!(cert.verdict.starts_with("FAILED:"));
    }
}

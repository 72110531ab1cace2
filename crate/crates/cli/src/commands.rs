//! Subcommand pipelines. Each returns the `result` section of a report.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Value};

use petri_deform::cohomology::{
    h1, h2, lift_search, obstruction_class, truncation_chain, Cochain1, GModule, LiftVerdict,
};
use petri_deform::deform::{
    check_invariance, check_invariance_all, compatibility_check, Compatibility, EquivariantIdeal, Invariance, LiftData,
    NormalSpace,
};
use petri_deform::group::{FiniteGroup, DEFAULT_BOUND_H1, DEFAULT_BOUND_H2};
use petri_deform::hermitian::{HermitianFixture, NonLiftVerdict};
use petri_deform::linalg::Matrix;
use petri_deform::rep::{naive_lift, rigid_diagonal_lift};
use petri_deform::ring::{Ring, RingKind};
use petri_deform::wire::{
    encode_elem, encode_matrix, DeformationDesc, FixtureDesc, GroupDesc, ProblemFile, RingDesc, SCHEMA_VERSION,
};
use petri_deform::{Error, Result};

/// Bounds and search parameters shared by all subcommands.
#[derive(Debug, Clone)]
pub struct Options {
    pub bound_group: Option<usize>,
    pub bound_branches: usize,
    pub depth: u32,
    pub chain: RingKind,
}

impl Options {
    pub fn to_json(&self) -> Value {
        json!({
            "bound_group": self.bound_group,
            "bound_branches": self.bound_branches,
            "depth": self.depth,
            "chain": self.chain.name(),
        })
    }
}

fn require<T>(x: Option<T>, what: &str) -> Result<T> {
    x.ok_or_else(|| Error::Schema(format!("the problem file has no {what}")))
}

fn vector_json(k: &Ring, v: &[u32]) -> Value {
    Value::Array(v.iter().map(|&x| encode_elem(k, k.from_residue(x))).collect())
}

fn cochain_json(k: &Ring, c: &Cochain1) -> Value {
    Value::Array(c.iter().map(|v| vector_json(k, v)).collect())
}

fn group_json(group: &FiniteGroup) -> Value {
    json!({
        "order": group.order(),
        "generators": group.generators().len(),
        "abelian": group.is_abelian(),
    })
}

fn load_group(pf: &ProblemFile, default_bound: usize, opts: &Options) -> Result<Arc<FiniteGroup>> {
    require(pf.group(opts.bound_group.unwrap_or(default_bound))?, "group")
}

fn invariance_json(group: &FiniteGroup, s: usize, inv: &Invariance) -> Value {
    let mut v = match inv {
        Invariance::Invariant { lambda } => json!({"verdict": "Invariant", "lambda": encode_matrix(lambda)}),
        Invariance::NotInvariant { generator, level, residual, rank } => json!({
            "verdict": "NotInvariant",
            "generator": generator,
            "level": level,
            "rank": rank,
            "residual_nonzero": residual.iter().filter(|&&x| x != 0).count(),
        }),
    };
    v["element"] = json!(s);
    v["word"] = json!(group.word(s));
    v
}

/// Per-element invariance of the ideal; with deformation data, of the lifted
/// ideal under the lifted representation.
pub fn invariance(pf: &ProblemFile, opts: &Options) -> Result<Value> {
    let model = require(pf.ideal()?, "ideal")?;
    let group = load_group(pf, DEFAULT_BOUND_H1, opts)?;
    let rho = pf.representation(&group)?;
    let (level, verdicts) = match pf.deformation(&rho)? {
        Some(data) => {
            let lifted = model.lift(&data.ext, &data.e_parts)?;
            if !data.lifted.is_verified() {
                return Err(Error::NaiveDoesNotReduce);
            }
            ("first-order", check_invariance_all(&lifted, &data.lifted)?)
        }
        None => ("special-fibre", check_invariance_all(&model, &rho)?),
    };
    let all = verdicts.iter().all(Invariance::is_invariant);
    let elements: Vec<Value> = verdicts.iter().enumerate().map(|(s, inv)| invariance_json(&group, s, inv)).collect();
    Ok(json!({
        "level": level,
        "group": group_json(&group),
        "all_invariant": all,
        "elements": elements,
    }))
}

fn module_for(pf: &ProblemFile, group: &Arc<FiniteGroup>) -> Result<(String, GModule)> {
    let desc = pf.module.clone().unwrap_or(petri_deform::wire::ModuleDesc { kind: "adjoint".into(), dim: None });
    let module = match desc.kind.as_str() {
        "adjoint" => GModule::adjoint(&pf.representation(group)?)?,
        "adjoint-mod-scalars" => GModule::adjoint_mod_scalars(&pf.representation(group)?)?,
        "trivial" => {
            let dim = require(desc.dim, "module dimension")?;
            GModule::trivial(group.clone(), &pf.ring()?.residue_field(), dim)
        }
        other => return Err(Error::Schema(format!("unknown module kind {other:?}"))),
    };
    Ok((desc.kind, module))
}

pub fn cohomology(pf: &ProblemFile, degree: u8, opts: &Options) -> Result<Value> {
    let default = if degree == 1 { DEFAULT_BOUND_H1 } else { DEFAULT_BOUND_H2 };
    let group = load_group(pf, default, opts)?;
    let (kind, module) = module_for(pf, &group)?;
    let k = module.ring().clone();
    let mut out = json!({
        "degree": degree,
        "group": group_json(&group),
        "module": {"kind": kind, "dim": module.dim(), "ring": RingDesc::of(&k)},
    });
    match degree {
        1 => {
            let h = h1(&module);
            out["z1_dim"] = json!(h.z1_dim);
            out["b1_dim"] = json!(h.b1_dim);
            out["h1_dim"] = json!(h.h1_dim);
            out["representatives"] = Value::Array(h.representatives.iter().map(|c| cochain_json(&k, c)).collect());
        }
        2 => {
            let h = h2(&module, opts.bound_group.unwrap_or(DEFAULT_BOUND_H2))?;
            out["z2_gauge_dim"] = json!(h.z2_gauge_dim);
            out["b2_gauge_dim"] = json!(h.b2_gauge_dim);
            out["h2_dim"] = json!(h.h2_dim);
            out["representatives"] = Value::Array(h.representatives.iter().map(|c| cochain_json(&k, c)).collect());
        }
        other => return Err(Error::Schema(format!("cohomology degree {other} is not 1 or 2"))),
    }
    Ok(out)
}

fn search_json(group: &FiniteGroup, verdict: &LiftVerdict) -> Value {
    match verdict {
        LiftVerdict::Lifted { depth, lift } => json!({
            "verdict": "Lifted",
            "depth": depth,
            "certificate": {
                "generator_images": group.generator_indices().iter().map(|&e| encode_matrix(&lift[e])).collect::<Vec<_>>(),
            },
        }),
        LiftVerdict::ObstructedAtDepth { depth, certificates } | LiftVerdict::Exhausted { depth, certificates } => {
            let name = if matches!(verdict, LiftVerdict::Exhausted { .. }) { "Exhausted" } else { "ObstructedAtDepth" };
            // Full cocycle, indexed a * |G| + b, for independent verification.
            let first = certificates.first().map(|c| {
                json!({
                    "branch": c.branch,
                    "nonzero_pairs": c.cocycle.iter().filter(|m| !m.is_zero()).count(),
                    "cocycle": c.cocycle.iter().map(encode_matrix).collect::<Vec<_>>(),
                })
            });
            json!({"verdict": name, "depth": depth, "obstructed_branches": certificates.len(), "certificate": first})
        }
    }
}

fn compat_json(c: &Compatibility) -> Value {
    match c {
        Compatibility::Pass(p) => json!({
            "verdict": "Pass",
            "identity_exact": p.identity_exact,
            "quotient_zero": p.quotient_zero,
        }),
        Compatibility::Fail { sigma, generator, residual, membership_agrees } => json!({
            "verdict": "Fail",
            "element": sigma,
            "generator": generator,
            "residual": encode_matrix(residual),
            "membership_agrees": membership_agrees,
        }),
    }
}

/// Obstruction at the first step, bounded lift search, and for deformation
/// data the rank, compatibility and (for the Hermitian fixture) character tests.
pub fn lift(pf: &ProblemFile, opts: &Options) -> Result<Value> {
    let group = load_group(pf, DEFAULT_BOUND_H1, opts)?;
    let rho = pf.representation(&group)?;
    if !rho.ring().is_field() {
        return Err(Error::NotAField(rho.ring().to_string()));
    }
    let chain = truncation_chain(rho.ring(), opts.chain, opts.depth.max(2))?;
    let first = obstruction_class(&naive_lift(&rho, &chain[0])?, &rho, &chain[0])?;
    let search = lift_search(&rho, &chain, opts.bound_branches)?;
    let mut out = json!({
        "group": group_json(&group),
        "chain": chain.iter().map(|e| e.source.to_string()).collect::<Vec<_>>(),
        "first_step": {"ring": chain[0].source.to_string(), "obstruction_vanishes": first.vanishes()},
        "search": search_json(&group, &search.verdict),
        "h1_dim": search.h1_dim,
        "steps": search.steps.iter().map(|s| json!({
            "ring": s.ring, "frontier": s.frontier, "lifted": s.lifted, "obstructed": s.obstructed, "truncated": s.truncated,
        })).collect::<Vec<_>>(),
    });
    let mut verdict = match search.verdict {
        LiftVerdict::Lifted { .. } => "Lifted",
        LiftVerdict::ObstructedAtDepth { .. } => "ObstructedAtDepth",
        LiftVerdict::Exhausted { .. } => "Exhausted",
    };

    if let (Some(model), Some(data)) = (pf.ideal()?, pf.deformation(&rho)?) {
        let lifted_model = model.lift(&data.ext, &data.e_parts)?;
        let mut rank = Vec::new();
        for &s in group.generator_indices() {
            let inv = check_invariance(&lifted_model, &data.lifted, s)?;
            rank.push(invariance_json(&group, s, &inv));
        }
        let rank_ok = rank.iter().all(|v| v["verdict"] == "Invariant");
        let eq = EquivariantIdeal::new(&model, &rho)?;
        let ext = &data.ext;
        let rho_lift = rho.images().iter().map(|m| m.section(ext)).collect::<Result<Vec<_>>>()?;
        let tau = data
            .lifted
            .images()
            .iter()
            .zip(&rho_lift)
            .map(|(l, s)| l.sub(s).div_e(ext).ok_or(Error::NotLiftsOfSamePoint))
            .collect::<Result<Vec<Matrix>>>()?;
        let compat = compatibility_check(&eq, &LiftData { ext: ext.clone(), rho_lift, tau, b: data.e_parts.clone() })?;
        out["deformation"] = json!({
            "rep_lift_is_homomorphism": data.lifted.is_verified(),
            "rank_test": rank,
            "compatibility": compat_json(&compat),
        });
        verdict = if rank_ok && compat.is_pass() { "Lifts" } else { "DoesNotLift" };
    }

    if let Some(p) = pf.fixture.as_ref().and_then(|f| f.hermitian) {
        let fx = HermitianFixture::new(p)?;
        let rigid = rigid_diagonal_lift(&fx.sigma_matrix())?;
        let character = match fx.non_lift_verdict() {
            NonLiftVerdict::DoesNotLift { generator, main_character, eps_character, offset } => json!({
                "verdict": "DoesNotLift",
                "generator": generator,
                "main_character": main_character,
                "eps_character": eps_character,
                "offset": offset,
                "modulus": p + 1,
            }),
            NonLiftVerdict::Lifts => json!({"verdict": "Lifts"}),
        };
        out["character_test"] = character;
        out["rigid_lift"] = json!({
            "order": rigid.order,
            "lift_space_dim": rigid.lift_space_dim,
            "conjugation_dim": rigid.conjugation_dim,
            "rigid": rigid.rigid,
        });
    }
    out["verdict"] = json!(verdict);
    Ok(out)
}

fn check_flag(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "violated"
    }
}

/// psi kernel and image, H^0(N), the tangent quotient and, for a
/// nontrivial group, the delta_G cocycles of the invariant tangent classes.
pub fn tangent(pf: &ProblemFile, opts: &Options) -> Result<Value> {
    let model = require(pf.ideal()?, "ideal")?;
    if !model.ring().is_field() {
        return Err(Error::NotAField(model.ring().to_string()));
    }
    let g = model.g();
    let canonical = model.canonical_check()?;
    let space = NormalSpace::new(&model)?;
    let psi = space.psi_kernel_and_image();
    let t = space.tangent_space_basis();
    let k = model.ring();
    let mut out = json!({
        "g": g,
        "r": model.r(),
        "hilbert": {"degree2": canonical.hilbert2, "degree3": canonical.hilbert3},
        "psi": {"kernel_dim": psi.kernel.len(), "image_dim": psi.image_dim, "kernel_is_scalars": psi.kernel_is_scalars},
        "normal_dim": t.normal_dim,
        "tangent_dim": t.dim,
        "tangent_basis_classes": t.basis.iter().map(|f| vector_json(k, &space.class(f))).collect::<Vec<_>>(),
        "assertions": {
            "canonical_numbers": check_flag(canonical.canonical),
            "kernel_is_scalars": check_flag(psi.kernel_is_scalars && psi.kernel.len() == 1),
            "image_is_g2_minus_1": check_flag(psi.image_dim + 1 == g * g),
            "image_in_normal": check_flag(t.image_in_normal),
            "tangent_is_3g_minus_3": check_flag(g >= 2 && t.dim == 3 * g - 3),
        },
    });
    if let Some(group) = pf.group(opts.bound_group.unwrap_or(DEFAULT_BOUND_H1))? {
        if group.order() > 1 {
            let rho = pf.representation(&group)?;
            let eq = EquivariantIdeal::new(&model, &rho)?;
            let classes = eq.invariant_tangent_classes(&t)?;
            let mut cocycles = Vec::new();
            for f in &classes {
                let dg = eq.delta_g_cocycle(f)?;
                cocycles.push(json!({
                    "holds": dg.holds(),
                    "class": vector_json(k, &space.class(f)),
                    "b_sigma": group.generator_indices().iter().map(|&s| encode_matrix(&dg.b[s])).collect::<Vec<_>>(),
                    "scalar_cocycle_nonzero": dg.lambda.iter().filter(|x| x.is_some_and(|v| !k.is_zero(v))).count(),
                }));
            }
            out["delta_g"] = json!({
                "group": group_json(&group),
                "invariant_tangent_dim": classes.len(),
                "cocycles": cocycles,
            });
        }
    }
    Ok(out)
}

/// The Hermitian fixture as a problem file; order 1 adds the first-order family.
pub fn hermitian(p: u64, order: u32) -> Result<ProblemFile> {
    if order > 1 {
        return Err(Error::Schema(format!("deformation order {order} is not modelled; use 0 or 1")));
    }
    let fx = HermitianFixture::new(p)?;
    let deformation = (order == 1).then(|| DeformationDesc {
        e_parts: fx.e_parts.iter().map(encode_matrix).collect(),
        rep_perturbation: BTreeMap::new(),
    });
    Ok(ProblemFile {
        schema: SCHEMA_VERSION,
        ring: RingDesc::of(&fx.field),
        g: Some(fx.g()),
        generators: Some(fx.special.generators().iter().map(encode_matrix).collect()),
        group: Some(GroupDesc { generators: vec![encode_matrix(&fx.sigma_matrix())] }),
        rep: None,
        module: None,
        deformation,
        fixture: Some(FixtureDesc { hermitian: Some(p) }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> Options {
        Options { bound_group: None, bound_branches: 64, depth: 3, chain: RingKind::TruncatedSeries }
    }

    fn roundtrip(pf: &ProblemFile) -> ProblemFile {
        ProblemFile::parse(&pf.to_json()).unwrap()
    }

    #[test]
    fn hermitian_special_fibre_is_invariant() {
        let pf = roundtrip(&hermitian(5, 0).unwrap());
        let r = invariance(&pf, &opts()).unwrap();
        assert_eq!(r["all_invariant"], true);
        assert_eq!(r["level"], "special-fibre");
    }

    #[test]
    fn hermitian_family_is_not_invariant() {
        let pf = roundtrip(&hermitian(5, 1).unwrap());
        let r = invariance(&pf, &opts()).unwrap();
        assert_eq!(r["all_invariant"], false);
        assert_eq!(r["elements"][0]["verdict"], "Invariant");
    }

    #[test]
    fn hermitian_pipeline_has_dual_certificates() {
        let pf = roundtrip(&hermitian(5, 1).unwrap());
        let r = lift(&pf, &opts()).unwrap();
        assert_eq!(r["verdict"], "DoesNotLift");
        assert_eq!(r["character_test"]["offset"], -1);
        assert_eq!(r["deformation"]["compatibility"]["verdict"], "Fail");
        assert_eq!(r["rigid_lift"]["rigid"], true);
    }

    #[test]
    fn order_two_is_rejected() {
        assert!(matches!(hermitian(5, 2), Err(Error::Schema(_))));
    }
}

use serde::Serialize;
use serde_json::{json, Value};

use sftdim::linalg::characteristic_polynomial;
use sftdim::shift_equiv::{search, spectral_obstructions, verify};
use sftdim::{
    Classification, CylinderElement, IntMatrix, IntPoly, K1Equality, Sft, ShiftEquivalenceWitness,
};

use crate::input::Element;
use crate::report::{Outcome, Status};
use crate::CliError;

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("library types serialize")
}

fn poly(p: &IntPoly) -> Value {
    json!({ "coefficients": p, "display": p.to_string() })
}

/// A float-backed quantity, or the reason it is unavailable.
fn try_f64(r: sftdim::Result<f64>) -> Value {
    match r {
        Ok(x) => json!(x),
        Err(e) => json!({ "unavailable": e.to_string() }),
    }
}

fn k1_status(e: &K1Equality) -> Status {
    match e {
        K1Equality::Undecided { .. } => Status::Undecided,
        _ => Status::Ok,
    }
}

fn mismatch(what: &str, a: &Element, b: &Element) -> CliError {
    CliError::Validation(format!(
        "flavor mismatch: {what} is not defined for ({}, {})",
        a.flavor(),
        b.flavor()
    ))
}

fn free_group(rank: usize) -> String {
    match rank {
        0 => "0".into(),
        1 => "Z".into(),
        r => format!("Z^{r}"),
    }
}

pub fn info(sft: &Sft) -> Outcome {
    let adj = sft.adjacency();
    let a = sft.a();
    let mp = sft.minpoly();
    let chi = characteristic_polynomial(a);
    let class = adj.classify();
    let mut checks = serde_json::Map::new();
    checks.insert(
        "minimal_polynomial_annihilates".into(),
        json!(mp.m.eval_matrix(a).is_zero()),
    );
    checks.insert(
        "minimal_polynomial_divides_characteristic".into(),
        json!(chi.exact_div_monic(&mp.m).is_some()),
    );
    let perron = match sft.perron() {
        Ok(p) => {
            // power iteration stops on the iterate change; the eigen-residual should be comparable
            checks.insert(
                "perron_residual_small".into(),
                json!(p.residual <= 1e-6 * p.lambda.max(1.0)),
            );
            to_value(p)
        }
        Err(e) => json!({ "unavailable": e.to_string() }),
    };
    let (period, spectral_radius) = match class {
        Classification::Reducible => (Value::Null, Value::Null),
        _ => {
            let d = adj.spectral_decomposition().expect("irreducible");
            checks.insert("block_cyclic".into(), json!(d.is_block_cyclic(adj)));
            // the mixing component is A^n on one class, so its Perron value is lambda^n
            let component = Sft::with_config(d.component.clone(), sft.config().clone());
            let radius = component
                .perron()
                .map(|p| json!(p.lambda.powf(1.0 / d.period as f64)))
                .unwrap_or(Value::Null);
            (json!(d.period), radius)
        }
    };
    let status = if checks.values().all(|v| v == &json!(true)) {
        Status::Ok
    } else {
        Status::Violation
    };
    let result = json!({
        "matrix": a,
        "classification": class,
        "irreducible": adj.is_irreducible(),
        "primitive": adj.is_primitive(),
        "period": period,
        "minimal_polynomial": {
            "m": poly(&mp.m),
            "l": mp.l,
            "k": mp.k,
            "p_A": poly(&mp.p),
        },
        "characteristic_polynomial": poly(&chi),
        "centralizer_rank": sft.centralizer_basis().rank,
        "perron": perron,
        "spectral_radius": spectral_radius,
        "self_check": checks,
    });
    Outcome { result, status }
}

pub fn kgroups(sft: &Sft) -> Result<Outcome, CliError> {
    sft.adjacency().require_irreducible()?;
    let k = sft.size();
    let c = sft.centralizer_basis();
    let b = sft.commutator_lattice();
    let k1 = sft.k1_group_structure();
    let mut k1_desc = free_group(k1.free_rank);
    for t in &k1.torsion {
        k1_desc.push_str(&format!(" + Z/{t}"));
    }
    if k1.free_rank == 0 && !k1.torsion.is_empty() {
        k1_desc = k1_desc.trim_start_matches("0 + ").to_string();
    }
    let result = json!({
        "centralizer": { "rank": c.rank, "basis": c.basis },
        "commutator": { "rank": b.rank, "basis": b.basis },
        "k1_invariant_factors": k1,
        "center": sft.center_basis(),
        "level_groups": {
            "stable": free_group(k),
            "unstable": free_group(k),
            "homoclinic": free_group(k * k),
            "k0_cylinder": free_group(c.rank),
            "k1_cylinder": k1_desc,
        },
        "connecting_maps": {
            "stable": "v -> vA",
            "unstable": "w -> Aw",
            "homoclinic": "X -> AXA",
            "k0_cylinder": "X -> AXA",
            "k1_cylinder": "Y -> AYA",
        },
    });
    Ok(Outcome::ok(result))
}

/// Facts about a cylinder K0 class: identity/zero tests, trace and R_A membership.
fn k0_facts(sft: &Sft, x: &sftdim::CylinderK0Element) -> Value {
    let member = sft.ra_membership(x);
    json!({
        "equals_identity": sft.k0_equal(x, &sft.k0_identity()),
        "equals_zero": sft.k0_equal(x, &sft.k0_zero()),
        "trace_ch": try_f64(sft.trace_ch(x)),
        "in_ra": member.is_some(),
        "ra_representative": member,
    })
}

pub fn mul(sft: &Sft, a: &Element, b: &Element) -> Result<Outcome, CliError> {
    let lift = |e: &Element| match e {
        Element::K0(x) => Some(CylinderElement::K0(x.clone())),
        Element::K1(y) => Some(CylinderElement::K1(y.clone())),
        _ => None,
    };
    let (Some(x), Some(y)) = (lift(a), lift(b)) else {
        return Err(mismatch("mul", a, b));
    };
    Ok(match sft.mul_graded(&x, &y) {
        CylinderElement::K0(p) => {
            let mut facts = k0_facts(sft, &p);
            facts["product"] = to_value(&p);
            Outcome::ok(facts)
        }
        CylinderElement::K1(p) => {
            let zero = sft.k1_equal(&p, &sft.k1_zero());
            let status = k1_status(&zero);
            Outcome {
                result: json!({ "product": p, "equals_zero": zero }),
                status,
            }
        }
    })
}

pub fn act(sft: &Sft, a: &Element, b: &Element) -> Result<Outcome, CliError> {
    let result = match (a, b) {
        (Element::S(v), Element::K0(x)) => {
            let r = sft.act_s(v, x);
            json!({
                "action": "right action of K0(CH) on the stable group",
                "result": r,
                "normalized": sft.normalize_s(&r),
                "trace": try_f64(sft.trace_s(&r)),
                "positivity": sft.is_positive_s(&r).map(|p| to_value(&p)).unwrap_or_else(|e| json!({ "unavailable": e.to_string() })),
            })
        }
        (Element::K0(x), Element::U(w)) => {
            let r = sft.act_u(x, w);
            json!({
                "action": "left action of K0(CH) on the unstable group",
                "result": r,
                "normalized": sft.normalize_u(&r),
                "trace": try_f64(sft.trace_u(&r)),
            })
        }
        _ => return Err(mismatch("act (use s*k0 or k0*u)", a, b)),
    };
    Ok(Outcome::ok(result))
}

pub fn trace(sft: &Sft, e: &Element) -> Result<Outcome, CliError> {
    let t = match e {
        Element::S(v) => sft.trace_s(v)?,
        Element::U(w) => sft.trace_u(w)?,
        Element::K0(x) => sft.trace_ch(x)?,
        other => {
            return Err(CliError::Validation(format!(
                "flavor mismatch: no trace on flavor {} (use s, u or k0)",
                other.flavor()
            )))
        }
    };
    let p = sft.perron()?;
    Ok(Outcome::ok(json!({
        "element": e.to_json(),
        "trace": t,
        "lambda": p.lambda,
    })))
}

pub fn ra(sft: &Sft, e: &Element) -> Result<Outcome, CliError> {
    let Element::K0(x) = e else {
        return Err(CliError::Validation(format!(
            "flavor mismatch: R_A membership needs a k0 element, found {}",
            e.flavor()
        )));
    };
    let member = sft.ra_membership(x);
    Ok(Outcome::ok(json!({
        "element": e.to_json(),
        "in_ra": member.is_some(),
        "representative": member.as_ref().map(|r| json!({
            "poly": poly(&r.poly),
            "level": r.level,
        })),
        "p_A": poly(&sft.minpoly().p),
    })))
}

pub fn duality(sft: &Sft, e: &Element, eval: Option<&Element>) -> Result<Outcome, CliError> {
    let (hom, unstable) = match e {
        Element::Hom(h) => (h.clone(), sft.hom_to_unstable(h)),
        Element::U(w) => (sft.unstable_to_hom(w), w.clone()),
        other => {
            return Err(CliError::Validation(format!(
                "flavor mismatch: duality takes a hom or a u element, found {}",
                other.flavor()
            )))
        }
    };
    let mut result = json!({
        "hom": Element::Hom(hom.clone()).to_json(),
        "unstable": unstable,
        "unstable_normalized": sft.normalize_u(&unstable),
    });
    if let Some(arg) = eval {
        let Element::S(v) = arg else {
            return Err(CliError::Validation(format!(
                "flavor mismatch: --eval takes an s element, found {}",
                arg.flavor()
            )));
        };
        let r = sft.hom_eval(&hom, v);
        let as_k0 = sft.ra_to_k0(&r);
        result["evaluation"] = json!({
            "argument": v,
            "value": { "poly": poly(&r.poly), "level": r.level },
            "as_k0": as_k0,
            "trace_ch": try_f64(sft.trace_ch(&as_k0)),
        });
    }
    Ok(Outcome::ok(result))
}

pub fn equal(sft: &Sft, a: &Element, b: &Element) -> Result<Outcome, CliError> {
    let (equal, status) = match (a, b) {
        (Element::S(x), Element::S(y)) => (json!(sft.equal_s(x, y)), Status::Ok),
        (Element::U(x), Element::U(y)) => (json!(sft.equal_u(x, y)), Status::Ok),
        (Element::H(x), Element::H(y)) => (json!(sft.equal_h(x, y)), Status::Ok),
        (Element::K0(x), Element::K0(y)) => (json!(sft.k0_equal(x, y)), Status::Ok),
        (Element::Hom(x), Element::Hom(y)) => (json!(sft.hom_equal(x, y)), Status::Ok),
        (Element::K1(x), Element::K1(y)) => {
            let r = sft.k1_equal(x, y);
            (to_value(&r), k1_status(&r))
        }
        _ => return Err(mismatch("equal", a, b)),
    };
    Ok(Outcome {
        result: json!({ "flavor": a.flavor(), "equal": equal, "l": sft.l() }),
        status,
    })
}

pub fn se_verify(a: &Sft, b: &Sft, w: ShiftEquivalenceWitness) -> Result<Outcome, CliError> {
    let report = verify(a.adjacency(), b.adjacency(), &w)?;
    let status = if report.valid {
        Status::Ok
    } else {
        Status::Violation
    };
    let mut result = json!({
        "valid": report.valid,
        "failures": report.failures(),
        "checks": report,
        "lag": w.k,
    });
    if report.valid {
        let phi = sftdim::ShiftEquivalence::new(a, b, w)?;
        let unit = phi.phi_ch(&a.k0_identity());
        result["unit_preserved"] = json!(b.k0_equal(&unit, &b.k0_identity()));
    }
    Ok(Outcome { result, status })
}

pub fn se_search(
    a: &Sft,
    b: &Sft,
    k_max: usize,
    entry_bound: u64,
    cap: u64,
) -> Result<Outcome, CliError> {
    let obstructions = spectral_obstructions(a.adjacency(), b.adjacency());
    let out = search(a.adjacency(), b.adjacency(), k_max, entry_bound, cap)?;
    let verdict = match (&out.witness, obstructions.is_empty()) {
        (Some(_), _) => "shift equivalent",
        (None, false) => "not shift equivalent",
        (None, true) => "undecided within bounds",
    };
    let status = if out.witness.is_none() && obstructions.is_empty() {
        Status::Undecided
    } else {
        Status::Ok
    };
    let witness_check = out
        .witness
        .as_ref()
        .map(|w| verify(a.adjacency(), b.adjacency(), w).map(|r| r.valid))
        .transpose()?;
    let status = if witness_check == Some(false) {
        Status::Violation
    } else {
        status
    };
    Ok(Outcome {
        result: json!({
            "verdict": verdict,
            "search": out,
            "witness_verified": witness_check,
        }),
        status,
    })
}

pub fn decompose(sft: &Sft) -> Result<Outcome, CliError> {
    let adj = sft.adjacency();
    adj.require_irreducible()?;
    let d = adj.spectral_decomposition()?;
    let cyclic = d.is_block_cyclic(adj);
    let reordered: IntMatrix = d.reordered(adj);
    let component = Sft::with_config(d.component.clone(), sft.config().clone());
    let lambda_component = component.perron().map(|p| p.lambda).ok();
    let result = json!({
        "period": d.period,
        "classes": d.classes,
        "vertex_order": d.vertex_order,
        "reordered": reordered,
        "block_cyclic": cyclic,
        "component": {
            "matrix": d.component.matrix(),
            "primitive": d.component.is_primitive(),
            "lambda": lambda_component,
            // the component is A^n restricted to one class
            "lambda_root": lambda_component.map(|l| l.powf(1.0 / d.period as f64)),
        },
    });
    let status = if cyclic && d.component.is_primitive() {
        Status::Ok
    } else {
        Status::Violation
    };
    Ok(Outcome { result, status })
}

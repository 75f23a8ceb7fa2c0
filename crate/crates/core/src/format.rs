//! JSON load and emit.
//!
//! Emission is canonical: keys sorted, compact, composition triples sorted,
//! one trailing newline. Loading a canonical file and emitting it again gives
//! the same bytes.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::diagonal::Diagram;
use crate::double::{validate_double, BoxId, DoubleGroupoid, DoubleParts};
use crate::error::{Error, Result};
use crate::extension::{CocyclePair, ExtensionData};
use crate::groupoid::{
    validate_bundle, validate_groupoid, AbelianGroupBundle, ArrowId, BundleAction, ElemId, FiniteGroupoid,
    GroupoidMorphism, ObjectId,
};
use crate::report::Report;

// Field order is the sorted key order of the emitted JSON.

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrowJson {
    src: usize,
    tgt: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupoidJson {
    arrows: Vec<ArrowJson>,
    compose: Vec<[usize; 3]>,
    identity: Vec<usize>,
    inverse: Vec<usize>,
    objects: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DoubleJson {
    #[serde(rename = "H")]
    h: GroupoidJson,
    #[serde(rename = "V")]
    v: GroupoidJson,
    b: Vec<usize>,
    base: usize,
    boxes: usize,
    hcompose: Vec<[usize; 3]>,
    hid: Vec<usize>,
    hinv: Vec<usize>,
    l: Vec<usize>,
    r: Vec<usize>,
    t: Vec<usize>,
    vcompose: Vec<[usize; 3]>,
    vid: Vec<usize>,
    vinv: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BundleJson {
    base: usize,
    fiber: Vec<usize>,
    neg: Vec<usize>,
    neutral: Vec<usize>,
    op: Vec<[usize; 3]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExtensionJson {
    bundle: BundleJson,
    frame: DoubleJson,
    hact: Vec<[usize; 3]>,
    sigma: Vec<[usize; 3]>,
    tau: Vec<[usize; 3]>,
    vact: Vec<[usize; 3]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagramJson {
    #[serde(rename = "D")]
    d: GroupoidJson,
    #[serde(rename = "H")]
    h: GroupoidJson,
    #[serde(rename = "V")]
    v: GroupoidJson,
    i: Vec<usize>,
    j: Vec<usize>,
}

fn parse<T: DeserializeOwned>(what: &str, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        Error::format(format!("{what}, line {} column {}", e.line(), e.column()), e.to_string())
    })
}

fn emit<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn triples<A: Copy, F: Fn(A) -> usize>(v: &[(A, A, A)], f: F) -> Vec<[usize; 3]> {
    v.iter().map(|&(a, b, c)| [f(a), f(b), f(c)]).collect()
}

fn in_context<T>(ctx: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Format { context, message } => Error::format(format!("{ctx}.{context}"), message),
        other => other,
    })
}

fn check(report: Report) -> Result<()> {
    if report.passed() {
        Ok(())
    } else {
        Err(Error::Invalid(Box::new(report)))
    }
}

fn groupoid_to_json(g: &FiniteGroupoid) -> GroupoidJson {
    GroupoidJson {
        arrows: g.arrows().map(|a| ArrowJson { src: g.src(a).0, tgt: g.tgt(a).0 }).collect(),
        compose: triples(&g.compose_entries(), |a| a.0),
        identity: g.object_ids().map(|p| g.identity(p).0).collect(),
        inverse: g.arrows().map(|a| g.inverse(a).0).collect(),
        objects: g.objects(),
    }
}

fn groupoid_from_json(j: GroupoidJson) -> Result<FiniteGroupoid> {
    FiniteGroupoid::from_parts(
        j.objects,
        j.arrows.iter().map(|a| (ObjectId(a.src), ObjectId(a.tgt))).collect(),
        j.compose.iter().map(|t| (ArrowId(t[0]), ArrowId(t[1]), ArrowId(t[2]))),
        j.identity.into_iter().map(ArrowId).collect(),
        j.inverse.into_iter().map(ArrowId).collect(),
    )
}

pub fn load_groupoid(text: &str, validate: bool) -> Result<FiniteGroupoid> {
    let g = groupoid_from_json(parse("groupoid", text)?)?;
    if validate {
        check(validate_groupoid(&g))?;
    }
    Ok(g)
}

pub fn emit_groupoid(g: &FiniteGroupoid) -> String {
    emit(&groupoid_to_json(g))
}

fn double_to_json(d: &DoubleGroupoid) -> DoubleJson {
    let p = d.to_parts();
    let arrows = |v: &[ArrowId]| v.iter().map(|a| a.0).collect();
    let boxes = |v: &[BoxId]| v.iter().map(|a| a.0).collect();
    DoubleJson {
        h: groupoid_to_json(&p.h),
        v: groupoid_to_json(&p.v),
        b: arrows(&p.b),
        base: p.base,
        boxes: p.boxes,
        hcompose: triples(&p.hcompose, |a| a.0),
        hid: boxes(&p.hid),
        hinv: boxes(&p.hinv),
        l: arrows(&p.l),
        r: arrows(&p.r),
        t: arrows(&p.t),
        vcompose: triples(&p.vcompose, |a| a.0),
        vid: boxes(&p.vid),
        vinv: boxes(&p.vinv),
    }
}

fn double_from_json(j: DoubleJson) -> Result<DoubleGroupoid> {
    let h = in_context("H", groupoid_from_json(j.h))?;
    let v = in_context("V", groupoid_from_json(j.v))?;
    let arrows = |v: Vec<usize>| v.into_iter().map(ArrowId).collect();
    let boxes = |v: Vec<usize>| v.into_iter().map(BoxId).collect();
    let box_triples = |v: Vec<[usize; 3]>| v.into_iter().map(|t| (BoxId(t[0]), BoxId(t[1]), BoxId(t[2]))).collect();
    DoubleGroupoid::from_parts(DoubleParts {
        base: j.base,
        h,
        v,
        boxes: j.boxes,
        t: arrows(j.t),
        b: arrows(j.b),
        l: arrows(j.l),
        r: arrows(j.r),
        hcompose: box_triples(j.hcompose),
        vcompose: box_triples(j.vcompose),
        hid: boxes(j.hid),
        vid: boxes(j.vid),
        hinv: boxes(j.hinv),
        vinv: boxes(j.vinv),
    })
}

/// Loads a double groupoid; with `validate`, also runs the full axiom
/// check and fails with [`Error::Invalid`].
pub fn load_double(text: &str, validate: bool) -> Result<DoubleGroupoid> {
    let d = double_from_json(parse("double groupoid", text)?)?;
    if validate {
        check(validate_double(&d))?;
    }
    Ok(d)
}

pub fn emit_double(d: &DoubleGroupoid) -> String {
    emit(&double_to_json(d))
}

/// Raw tables of a double groupoid file, for emitting tables that need not
/// satisfy the axioms.
pub fn emit_double_parts(p: &DoubleParts) -> String {
    let arrows = |v: &[ArrowId]| v.iter().map(|a| a.0).collect();
    let boxes = |v: &[BoxId]| v.iter().map(|a| a.0).collect();
    let mut hc = triples(&p.hcompose, |a| a.0);
    let mut vc = triples(&p.vcompose, |a| a.0);
    hc.sort_unstable();
    vc.sort_unstable();
    emit(&DoubleJson {
        h: groupoid_to_json(&p.h),
        v: groupoid_to_json(&p.v),
        b: arrows(&p.b),
        base: p.base,
        boxes: p.boxes,
        hcompose: hc,
        hid: boxes(&p.hid),
        hinv: boxes(&p.hinv),
        l: arrows(&p.l),
        r: arrows(&p.r),
        t: arrows(&p.t),
        vcompose: vc,
        vid: boxes(&p.vid),
        vinv: boxes(&p.vinv),
    })
}

fn bundle_to_json(k: &AbelianGroupBundle) -> BundleJson {
    BundleJson {
        base: k.base(),
        fiber: k.elements().map(|e| k.fiber_of(e).0).collect(),
        neg: k.elements().map(|e| k.neg(e).0).collect(),
        neutral: (0..k.base()).map(|p| k.neutral(ObjectId(p)).0).collect(),
        op: triples(&k.op_entries(), |e| e.0),
    }
}

fn bundle_from_json(j: BundleJson) -> Result<AbelianGroupBundle> {
    AbelianGroupBundle::from_parts(
        j.base,
        j.fiber.into_iter().map(ObjectId).collect(),
        j.op.iter().map(|t| (ElemId(t[0]), ElemId(t[1]), ElemId(t[2]))),
        j.neutral.into_iter().map(ElemId).collect(),
        j.neg.into_iter().map(ElemId).collect(),
    )
}

pub fn load_bundle(text: &str, validate: bool) -> Result<AbelianGroupBundle> {
    let k = bundle_from_json(parse("bundle", text)?)?;
    if validate {
        check(validate_bundle(&k))?;
    }
    Ok(k)
}

pub fn emit_bundle(k: &AbelianGroupBundle) -> String {
    emit(&bundle_to_json(k))
}

fn action_triples(a: &BundleAction) -> Vec<[usize; 3]> {
    let mut v: Vec<[usize; 3]> = a.entries().into_iter().map(|(g, x, y)| [g.0, x.0, y.0]).collect();
    v.sort_unstable();
    v
}

fn cocycle_triples(m: &BTreeMap<(BoxId, BoxId), ElemId>) -> Vec<[usize; 3]> {
    m.iter().map(|(&(f, g), &k)| [f.0, g.0, k.0]).collect()
}

fn cocycle_from(field: &str, v: Vec<[usize; 3]>, frame: &DoubleGroupoid, k: &AbelianGroupBundle) -> Result<BTreeMap<(BoxId, BoxId), ElemId>> {
    let mut m = BTreeMap::new();
    for (i, t) in v.into_iter().enumerate() {
        if t[0] >= frame.len() || t[1] >= frame.len() || t[2] >= k.len() {
            return Err(Error::format(format!("{field}[{i}]"), "index out of range"));
        }
        if m.insert((BoxId(t[0]), BoxId(t[1])), ElemId(t[2])).is_some() {
            return Err(Error::format(format!("{field}[{i}]"), format!("duplicate entry for ({}, {})", t[0], t[1])));
        }
    }
    Ok(m)
}

/// Loads extension data. Shapes are checked here; the cocycle equations are
/// left to [`crate::extension::validate_cocycle_equations`].
pub fn load_extension(text: &str) -> Result<ExtensionData> {
    let j: ExtensionJson = parse("extension data", text)?;
    let bundle = in_context("bundle", bundle_from_json(j.bundle))?;
    let frame = in_context("frame", double_from_json(j.frame))?;
    if bundle.base() != frame.base() {
        return Err(Error::format("bundle.base", format!("{} objects but the frame has {}", bundle.base(), frame.base())));
    }
    let triple = |t: [usize; 3]| (ArrowId(t[0]), ElemId(t[1]), ElemId(t[2]));
    let vact = in_context(
        "vact",
        BundleAction::from_parts(frame.v().clone(), bundle.projection().to_vec(), j.vact.into_iter().map(triple)),
    )?;
    let hact = in_context(
        "hact",
        BundleAction::from_parts(frame.h().clone(), bundle.projection().to_vec(), j.hact.into_iter().map(triple)),
    )?;
    let tau = cocycle_from("tau", j.tau, &frame, &bundle)?;
    let sigma = cocycle_from("sigma", j.sigma, &frame, &bundle)?;
    Ok(ExtensionData {
        bundle,
        frame,
        vact,
        hact,
        cocycles: CocyclePair { tau, sigma },
    })
}

pub fn emit_extension(e: &ExtensionData) -> String {
    emit(&ExtensionJson {
        bundle: bundle_to_json(&e.bundle),
        frame: double_to_json(&e.frame),
        hact: action_triples(&e.hact),
        sigma: cocycle_triples(&e.cocycles.sigma),
        tau: cocycle_triples(&e.cocycles.tau),
        vact: action_triples(&e.vact),
    })
}

pub fn load_diagram(text: &str, validate: bool) -> Result<Diagram> {
    let j: DiagramJson = parse("diagram", text)?;
    let d = in_context("D", groupoid_from_json(j.d))?;
    let h = in_context("H", groupoid_from_json(j.h))?;
    let v = in_context("V", groupoid_from_json(j.v))?;
    for (field, map, src) in [("i", &j.i, &h), ("j", &j.j, &v)] {
        if map.len() != src.arrow_count() {
            return Err(Error::format(field, format!("expected {} entries, found {}", src.arrow_count(), map.len())));
        }
        if let Some((k, a)) = map.iter().enumerate().find(|(_, &a)| a >= d.arrow_count()) {
            return Err(Error::format(format!("{field}[{k}]"), format!("arrow {a} out of range")));
        }
    }
    let dg = Diagram {
        d,
        h,
        v,
        i: GroupoidMorphism::new(j.i.into_iter().map(ArrowId).collect()),
        j: GroupoidMorphism::new(j.j.into_iter().map(ArrowId).collect()),
    };
    if validate {
        check(dg.validate())?;
    }
    Ok(dg)
}

pub fn emit_diagram(dg: &Diagram) -> String {
    let map = |m: &GroupoidMorphism, n: usize| (0..n).map(|a| m.apply(ArrowId(a)).0).collect();
    emit(&DiagramJson {
        d: groupoid_to_json(&dg.d),
        h: groupoid_to_json(&dg.h),
        v: groupoid_to_json(&dg.v),
        i: map(&dg.i, dg.h.arrow_count()),
        j: map(&dg.j, dg.v.arrow_count()),
    })
}

/// Any serializable report value, canonically.
pub fn emit_json<T: Serialize>(value: &T) -> String {
    emit(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn emit_load_emit_is_stable() {
        for (name, d) in fixtures::all() {
            let text = emit_double(&d);
            let back = load_double(&text, true).unwrap();
            assert_eq!(back, d, "{name}");
            assert_eq!(emit_double(&back), text, "{name}");
        }
        let e = fixtures::twisted_z3_data();
        let text = emit_extension(&e);
        assert_eq!(emit_extension(&load_extension(&text).unwrap()), text);
        let dg = fixtures::s3_diagram();
        let text = emit_diagram(&dg);
        assert_eq!(load_diagram(&text, true).unwrap(), dg);
    }

    #[test]
    fn keys_are_sorted() {
        let text = emit_double(&fixtures::a2());
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert!(text.starts_with("{\"H\":"));
        assert!(text.ends_with("}\n"));
    }

    #[test]
    fn mismatched_compose_triple_is_a_format_error() {
        // a0 : 0 → 1 composed with itself
        let text = r#"{"arrows":[{"src":0,"tgt":1},{"src":1,"tgt":0},{"src":0,"tgt":0},{"src":1,"tgt":1}],"compose":[[0,0,2]],"identity":[2,3],"inverse":[1,0,2,3],"objects":2}"#;
        assert!(matches!(load_groupoid(text, false), Err(Error::Format { .. })));
    }

    #[test]
    fn syntax_errors_carry_line() {
        let err = load_double("{\n\"base\": }", false).unwrap_err();
        match err {
            Error::Format { context, .. } => assert!(context.contains("line 2"), "{context}"),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn unknown_fields_rejected() {
        let mut text = emit_groupoid(&FiniteGroupoid::discrete(1));
        text.insert_str(1, "\"extra\":1,");
        assert!(matches!(load_groupoid(&text, false), Err(Error::Format { .. })));
    }
}

//! The core groupoid of boxes with identity top and right sides, its action on
//! all boxes, and the abelian kernel bundle of boxes with four identity sides.

use std::collections::HashMap;

use crate::double::{corners, frame, has_filling, is_vacant, BoxId, DoubleGroupoid};
use crate::error::{Error, Result};
use crate::groupoid::{
    component_of, components, isotropy, orbit, validate_groupoid, AbelianGroupBundle, ArrowId, BundleAction,
    ElemId, FiniteGroupoid, ObjectId,
};
use crate::report::{anchors, Check, Report};

/// The core groupoid: arrow `i` is the box `boxes[i]`, going from its
/// bottom-left to its bottom-right corner.
#[derive(Clone, Debug)]
pub struct CoreGroupoid {
    pub groupoid: FiniteGroupoid,
    pub boxes: Vec<BoxId>,
    index: HashMap<BoxId, ArrowId>,
}

impl CoreGroupoid {
    pub fn arrow_of(&self, e: BoxId) -> Option<ArrowId> {
        self.index.get(&e).copied()
    }

    pub fn box_of(&self, a: ArrowId) -> BoxId {
        self.boxes[a.0]
    }

    pub fn contains(&self, e: BoxId) -> bool {
        self.index.contains_key(&e)
    }
}

pub fn is_core_box(d: &DoubleGroupoid, e: BoxId) -> bool {
    d.h().is_identity(d.t(e)) && d.v().is_identity(d.r(e))
}

pub fn is_kernel_box(d: &DoubleGroupoid, k: BoxId) -> bool {
    is_core_box(d, k) && d.h().is_identity(d.b(k)) && d.v().is_identity(d.l(k))
}

/// `E ⇀ A`: the 2x2 array with `⟦id l(A)⟧ | A` on top and `E | ⟦id b(A)⟧`
/// below, defined when `br(E) = bl(A)`. With `E` in the core this is also
/// the core product `E ∘ A`.
pub fn core_act(d: &DoubleGroupoid, e: BoxId, a: BoxId) -> Result<BoxId> {
    if d.br(e) != d.bl(a) {
        return Err(Error::NotComposable(format!(
            "{e} has bottom-right corner {} but {a} has bottom-left corner {}",
            d.br(e),
            d.bl(a)
        )));
    }
    let top = d.hcompose(d.hid(d.l(a)), a)?;
    let bottom = d.hcompose(e, d.vid(d.b(a)))?;
    d.vcompose(top, bottom)
}

pub fn core(d: &DoubleGroupoid) -> Result<CoreGroupoid> {
    let boxes: Vec<BoxId> = d.boxes().filter(|&e| is_core_box(d, e)).collect();
    let index: HashMap<BoxId, ArrowId> = boxes.iter().enumerate().map(|(i, &e)| (e, ArrowId(i))).collect();
    let arrows = boxes.iter().map(|&e| (d.bl(e), d.br(e))).collect();
    let mut failure = None;
    let groupoid = FiniteGroupoid::generate(d.base(), arrows, |x, y| {
        let product = core_act(d, boxes[x.0], boxes[y.0]).and_then(|c| {
            index
                .get(&c)
                .copied()
                .ok_or_else(|| Error::Inconsistent(format!("core product {c} is not a core box")))
        });
        product.unwrap_or_else(|err| {
            failure.get_or_insert(err);
            ArrowId(0)
        })
    });
    if let Some(err) = failure {
        return Err(err);
    }
    let groupoid = groupoid?;
    for p in d.objects() {
        let theta = d.theta(p);
        if boxes[groupoid.identity(p).0] != theta {
            return Err(Error::Inconsistent(format!("the core identity at {p} is not {theta}")));
        }
    }
    Ok(CoreGroupoid { groupoid, boxes, index })
}

/// The core acting on all boxes fibered by their bottom-left corner.
pub fn core_action(d: &DoubleGroupoid, c: &CoreGroupoid) -> Result<BundleAction> {
    let projection: Vec<ObjectId> = d.boxes().map(|a| d.gamma(a)).collect();
    let mut entries = Vec::new();
    for a in d.boxes() {
        for &e in c.groupoid.arrows_into(d.gamma(a)) {
            entries.push((e, ElemId(a.0), ElemId(core_act(d, c.box_of(e), a)?.0)));
        }
    }
    BundleAction::from_parts(c.groupoid.clone(), projection, entries)
}

/// Checks that the core orbit of each box is the set of boxes with its top and
/// right sides, and that the action is free.
pub fn orbit_is_ur(d: &DoubleGroupoid) -> Result<Report> {
    let c = core(d)?;
    let act = core_action(d, &c)?;
    let mut report = Report::new("core action");
    let mut orbits = Check::new("orbits are Ur-sets", anchors::CORE_ACTION);
    let mut free = Check::new("isotropy is trivial", anchors::CORE_ACTION);
    report.absorb("action: ", crate::groupoid::validate_action(&act));
    for a in d.boxes() {
        let orb: Vec<BoxId> = orbit(&act, ElemId(a.0)).into_iter().map(|e| BoxId(e.0)).collect();
        let ur = d.ur_set(d.t(a), d.r(a))?;
        orbits.case(orb == ur, || format!("orbit of {a} is {orb:?}, Ur-set is {ur:?}"));
        let iso = isotropy(&act, ElemId(a.0));
        free.case(iso.len() == 1, || format!("{a} is fixed by {} core boxes", iso.len()));
    }
    report.push(orbits);
    report.push(free);
    Ok(report)
}

/// The kernel bundle: element `i` is the box `boxes[i]`.
#[derive(Clone, Debug)]
pub struct KernelBundle {
    pub bundle: AbelianGroupBundle,
    pub boxes: Vec<BoxId>,
    index: HashMap<BoxId, ElemId>,
}

impl KernelBundle {
    pub fn elem_of(&self, k: BoxId) -> Option<ElemId> {
        self.index.get(&k).copied()
    }

    pub fn box_of(&self, e: ElemId) -> BoxId {
        self.boxes[e.0]
    }
}

pub fn kernel(d: &DoubleGroupoid) -> Result<KernelBundle> {
    let boxes: Vec<BoxId> = d.boxes().filter(|&k| is_kernel_box(d, k)).collect();
    let index: HashMap<BoxId, ElemId> = boxes.iter().enumerate().map(|(i, &k)| (k, ElemId(i))).collect();
    let elem = |k: BoxId, what: &str| {
        index
            .get(&k)
            .copied()
            .ok_or_else(|| Error::NotAbelian(format!("{what} {k} leaves the kernel")))
    };
    let fiber: Vec<ObjectId> = boxes.iter().map(|&k| d.bl(k)).collect();
    let mut op = Vec::new();
    for (i, &k) in boxes.iter().enumerate() {
        for (j, &m) in boxes.iter().enumerate() {
            if fiber[i] != fiber[j] {
                continue;
            }
            let vert = d.vcompose(k, m)?;
            let horiz = d.hcompose(k, m)?;
            if vert != horiz {
                return Err(Error::NotAbelian(format!("{k}/{m} = {vert} but {k}{m} = {horiz}")));
            }
            let swapped = d.vcompose(m, k)?;
            if swapped != vert {
                return Err(Error::NotAbelian(format!("{k}/{m} = {vert} but {m}/{k} = {swapped}")));
            }
            let core_product = core_act(d, k, m)?;
            if core_product != vert {
                return Err(Error::NotAbelian(format!(
                    "core product of {k} and {m} is {core_product}, not {vert}"
                )));
            }
            op.push((ElemId(i), ElemId(j), elem(vert, "product")?));
        }
    }
    let neutral = d.objects().map(|p| elem(d.theta(p), "identity")).collect::<Result<Vec<_>>>()?;
    let neg = boxes.iter().map(|&k| elem(d.vinv(k), "inverse")).collect::<Result<Vec<_>>>()?;
    let bundle = AbelianGroupBundle::from_parts(d.base(), fiber, op, neutral, neg)?;
    Ok(KernelBundle { bundle, boxes, index })
}

fn sandwich_action(
    k: &KernelBundle,
    actor: &FiniteGroupoid,
    conj: impl Fn(ArrowId, BoxId) -> Result<BoxId>,
) -> Result<BundleAction> {
    let mut entries = Vec::new();
    for e in k.bundle.elements() {
        for &g in actor.arrows_into(k.bundle.fiber_of(e)) {
            let image = conj(g, k.box_of(e))?;
            let image = k
                .elem_of(image)
                .ok_or_else(|| Error::Inconsistent(format!("conjugate of {} by {g} is {image}, not in the kernel", k.box_of(e))))?;
            entries.push((g, e, image));
        }
    }
    BundleAction::from_parts(actor.clone(), k.bundle.projection().to_vec(), entries)
}

/// `g · K = ⟦id g⟧ / K / ⟦id g⁻¹⟧` for vertical arrows `g` ending at `p(K)`.
pub fn v_action(d: &DoubleGroupoid, k: &KernelBundle) -> Result<BundleAction> {
    sandwich_action(k, d.v(), |g, b| {
        let upper = d.vcompose(d.hid(g), b)?;
        d.vcompose(upper, d.hid(d.v().inverse(g)))
    })
}

/// `x · K = ⟦id x⟧ K ⟦id x⁻¹⟧` for horizontal arrows `x` ending at `p(K)`.
pub fn h_action(d: &DoubleGroupoid, k: &KernelBundle) -> Result<BundleAction> {
    sandwich_action(k, d.h(), |x, b| {
        let left = d.hcompose(d.vid(x), b)?;
        d.hcompose(left, d.vid(d.h().inverse(x)))
    })
}

/// Checks `1 → K → E → core(frame) → 1` under the filling condition.
pub fn frame_core_sequence(d: &DoubleGroupoid) -> Result<Report> {
    if !has_filling(d) {
        return Err(Error::NoFilling("the frame sequence is only checked under filling".into()));
    }
    let a = anchors::CORE_SEQUENCE;
    let e = core(d)?;
    let k = kernel(d)?;
    let f = frame(d)?;
    let fe = core(&f)?;
    let mut report = Report::new("kernel, core and frame core");
    // Π restricted to the core, as a map of arrows
    let mut map = Vec::with_capacity(e.boxes.len());
    let mut maps = Check::new("frame map sends core to frame core", a);
    for &b in &e.boxes {
        let image = f.preimages(&d.pi(b)).first().copied().and_then(|fb| fe.arrow_of(fb));
        maps.case(image.is_some(), || format!("core box {b} has no image in the frame core"));
        map.push(image.unwrap_or(ArrowId(0)));
    }
    if !maps.passed() {
        report.push(maps);
        return Ok(report);
    }
    report.push(maps);
    let morphism = crate::groupoid::GroupoidMorphism::new(map.clone());
    report.absorb("frame map on cores: ", crate::groupoid::validate_morphism(&e.groupoid, &fe.groupoid, &morphism));

    let mut onto = Check::new("frame map onto the frame core", a);
    let mut hit = vec![false; fe.boxes.len()];
    for m in &map {
        hit[m.0] = true;
    }
    for (i, h) in hit.iter().enumerate() {
        onto.case(*h, || format!("frame core box {} has no preimage", fe.boxes[i]));
    }
    let mut exact = Check::new("kernel of the frame map is the kernel bundle", a);
    for (i, &b) in e.boxes.iter().enumerate() {
        let trivial = fe.groupoid.is_identity(map[i]);
        exact.case(trivial == k.elem_of(b).is_some(), || {
            format!("{b}: maps to an identity = {trivial}, lies in kernel = {}", k.elem_of(b).is_some())
        });
    }
    let mut card = Check::new("vertex group orders multiply", a);
    for p in d.objects() {
        let (ne, nk, nf) = (
            e.groupoid.vertex_group(p).len(),
            k.bundle.fiber(p).len(),
            fe.groupoid.vertex_group(p).len(),
        );
        card.case(ne == nk * nf, || format!("at {p}: |E| = {ne}, |K| = {nk}, |frame core| = {nf}"));
    }
    report.push(onto);
    report.push(exact);
    report.push(card);
    Ok(report)
}

/// Checks the corner formula `⌐(B) = |component of bl(B)| · |E(bl(B))|` for
/// every box, its consequence for `θ`, and vacancy against a trivial core.
pub fn corner_formula(d: &DoubleGroupoid) -> Result<Report> {
    let a = anchors::CORNER_FORMULA;
    let e = core(d)?;
    let c = corners(d);
    let predicted = |q: ObjectId| component_of(&e.groupoid, q).len() * e.groupoid.vertex_group(q).len();
    let mut report = Report::new("corner formula");
    let mut formula = Check::new("upper-right corner formula", a);
    for b in d.boxes() {
        let q = d.bl(b);
        let (got, want) = (c.boxes[b.0].upper_right, predicted(q));
        formula.case(got == want, || format!("{b}: corner {got}, formula {want} at {q}"));
    }
    let mut theta = Check::new("theta formula", a);
    for q in d.objects() {
        theta.case(c.theta[q.0] == predicted(q), || format!("theta({q}) = {}, formula {}", c.theta[q.0], predicted(q)));
    }
    let mut constant = Check::new("theta constant on core components", a);
    for block in components(&e.groupoid) {
        let first = c.theta[block[0].0];
        for q in &block {
            constant.case(c.theta[q.0] == first, || format!("theta({q}) = {} but theta({}) = {first}", c.theta[q.0], block[0]));
        }
    }
    let mut vacancy = Check::new("vacant exactly when the core is trivial", a);
    let vacant = is_vacant(d);
    let trivial = e.groupoid.is_discrete();
    vacancy.case(vacant == trivial, || format!("vacant = {vacant}, trivial core = {trivial}"));
    report.push(formula);
    report.push(theta);
    report.push(constant);
    report.push(vacancy);
    Ok(report)
}

/// Validates the derived structures: the core is a groupoid, the kernel an
/// abelian bundle, and both edge actions act by fiber isomorphisms.
pub fn check_core_kernel(d: &DoubleGroupoid) -> Result<Report> {
    let e = core(d)?;
    let k = kernel(d)?;
    let mut report = Report::new("core and kernel");
    report.absorb("core: ", validate_groupoid(&e.groupoid));
    report.absorb("kernel: ", crate::groupoid::validate_bundle(&k.bundle));
    let va = v_action(d, &k)?;
    let ha = h_action(d, &k)?;
    report.absorb("vertical action: ", crate::groupoid::validate_action(&va));
    report.absorb("vertical action: ", va.check_by_automorphisms(&k.bundle));
    report.absorb("horizontal action: ", crate::groupoid::validate_action(&ha));
    report.absorb("horizontal action: ", ha.check_by_automorphisms(&k.bundle));
    for c in report.checks.iter_mut() {
        if c.law.starts_with("kernel") {
            c.anchor = anchors::KERNEL_BUNDLE.into();
        } else if c.law.contains("action") {
            c.anchor = anchors::EDGE_ACTIONS.into();
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::double::coarse;

    fn cpair2() -> DoubleGroupoid {
        let p2 = FiniteGroupoid::pair(2);
        coarse(&p2, &p2).unwrap()
    }

    #[test]
    fn core_of_coarse_pair_is_pair_groupoid() {
        let d = cpair2();
        let e = core(&d).unwrap();
        assert_eq!(e.groupoid.arrow_count(), 4);
        assert!(e.groupoid.is_connected());
        assert!(validate_groupoid(&e.groupoid).passed());
    }

    #[test]
    fn identity_core_box_acts_trivially() {
        let d = cpair2();
        for a in d.boxes() {
            assert_eq!(core_act(&d, d.theta(d.gamma(a)), a).unwrap(), a);
        }
    }

    #[test]
    fn coarse_pair_orbits_are_ur_sets() {
        let d = cpair2();
        assert!(orbit_is_ur(&d).unwrap().passed());
        let k = kernel(&d).unwrap();
        assert_eq!(k.bundle.len(), 2);
        assert!(check_core_kernel(&d).unwrap().passed());
        assert!(frame_core_sequence(&d).unwrap().passed());
        assert!(corner_formula(&d).unwrap().passed());
    }

    #[test]
    fn core_act_rejects_mismatched_corner() {
        let d = cpair2();
        let e = d
            .boxes()
            .find(|&e| is_core_box(&d, e) && d.br(e) != d.bl(d.theta(ObjectId(0))))
            .unwrap();
        assert!(matches!(core_act(&d, e, d.theta(ObjectId(0))), Err(Error::NotComposable(_))));
    }
}

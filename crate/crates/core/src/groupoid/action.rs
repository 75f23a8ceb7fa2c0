use std::collections::{BTreeSet, HashMap};

use super::{check_subgroup, component_of, AbelianGroupBundle, ArrowId, ElemId, FiniteGroupoid, ObjectId};
use crate::error::{Error, Result};
use crate::report::{anchors, Check, Report};

/// A left action of a groupoid on a set fibered over its base.
///
/// `g ▷ x` is defined when `tgt(g) == p(x)` and lies over `src(g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleAction {
    actor: FiniteGroupoid,
    projection: Vec<ObjectId>,
    act: HashMap<(ArrowId, ElemId), ElemId>,
}

impl BundleAction {
    pub fn from_parts(
        actor: FiniteGroupoid,
        projection: Vec<ObjectId>,
        entries: impl IntoIterator<Item = (ArrowId, ElemId, ElemId)>,
    ) -> Result<Self> {
        let n = projection.len();
        if let Some((i, p)) = projection.iter().enumerate().find(|(_, p)| p.0 >= actor.objects()) {
            return Err(Error::format(format!("projection[{i}]"), format!("object {} out of range", p.0)));
        }
        let mut act = HashMap::new();
        for (i, (g, x, y)) in entries.into_iter().enumerate() {
            if g.0 >= actor.arrow_count() || x.0 >= n || y.0 >= n {
                return Err(Error::format(format!("action[{i}]"), "index out of range"));
            }
            if actor.tgt(g) != projection[x.0] {
                return Err(Error::format(
                    format!("action[{i}]"),
                    format!("arrow {} ends at {} but element {} lies over {}", g.0, actor.tgt(g), x.0, projection[x.0]),
                ));
            }
            if act.insert((g, x), y).is_some() {
                return Err(Error::format(format!("action[{i}]"), format!("duplicate entry for ({}, {})", g.0, x.0)));
            }
        }
        Ok(BundleAction {
            actor,
            projection,
            act,
        })
    }

    /// Tabulates `f` on every pair with `tgt(g) == p(x)`.
    pub fn from_fn(
        actor: FiniteGroupoid,
        projection: Vec<ObjectId>,
        f: impl Fn(ArrowId, ElemId) -> ElemId,
    ) -> Self {
        let mut act = HashMap::new();
        for x in (0..projection.len()).map(ElemId) {
            for &g in actor.arrows_into(projection[x.0]) {
                act.insert((g, x), f(g, x));
            }
        }
        BundleAction {
            actor,
            projection,
            act,
        }
    }

    pub fn actor(&self) -> &FiniteGroupoid {
        &self.actor
    }

    pub fn projection(&self) -> &[ObjectId] {
        &self.projection
    }

    pub fn elements(&self) -> impl Iterator<Item = ElemId> {
        (0..self.projection.len()).map(ElemId)
    }

    pub fn p(&self, x: ElemId) -> ObjectId {
        self.projection[x.0]
    }

    pub fn try_act(&self, g: ArrowId, x: ElemId) -> Option<ElemId> {
        self.act.get(&(g, x)).copied()
    }

    pub fn act(&self, g: ArrowId, x: ElemId) -> Result<ElemId> {
        if self.actor.tgt(g) != self.p(x) {
            return Err(Error::NotComposable(format!(
                "{g} ends at {} but {x} lies over {}",
                self.actor.tgt(g),
                self.p(x)
            )));
        }
        self.try_act(g, x)
            .ok_or_else(|| Error::NotComposable(format!("no action entry for ({g}, {x})")))
    }

    /// All entries `(g, x, g▷x)`, sorted.
    pub fn entries(&self) -> Vec<(ArrowId, ElemId, ElemId)> {
        let mut v: Vec<_> = self.act.iter().map(|(&(g, x), &y)| (g, x, y)).collect();
        v.sort_unstable();
        v
    }

    /// Whether every arrow acts as a group isomorphism between fibers of `k`.
    pub fn check_by_automorphisms(&self, k: &AbelianGroupBundle) -> Report {
        let a = anchors::ACTION_AXIOMS;
        let mut report = Report::new("action by fiber isomorphisms");
        let mut hom = Check::new("arrows act additively", a);
        let mut bij = Check::new("arrows act bijectively between fibers", a);
        for g in self.actor.arrows() {
            let (s, t) = (self.actor.src(g), self.actor.tgt(g));
            let f = k.fiber(t);
            let image: BTreeSet<_> = f.iter().filter_map(|&x| self.try_act(g, x)).collect();
            bij.case(image.len() == f.len() && image.len() == k.fiber(s).len(), || {
                format!("{g} maps the fiber over {t} onto {} of {} elements", image.len(), k.fiber(s).len())
            });
            for &x in f {
                for &y in f {
                    let lhs = k.try_add(x, y).and_then(|xy| self.try_act(g, xy));
                    let rhs = match (self.try_act(g, x), self.try_act(g, y)) {
                        (Some(gx), Some(gy)) => k.try_add(gx, gy),
                        _ => None,
                    };
                    hom.case(lhs.is_some() && lhs == rhs, || {
                        format!("{g}({x}+{y}) = {lhs:?} but {g}{x}+{g}{y} = {rhs:?}")
                    });
                }
            }
        }
        report.push(hom);
        report.push(bij);
        report
    }
}

/// Exhaustively checks the action axioms.
pub fn validate_action(a: &BundleAction) -> Report {
    let anchor = anchors::ACTION_AXIOMS;
    let g = a.actor();
    let mut report = Report::new("groupoid action");
    let mut domain = Check::new("action defined exactly when the arrow ends over the element", anchor);
    let mut lands = Check::new("action lands over the source", anchor);
    for x in a.elements() {
        for h in g.arrows() {
            let should = g.tgt(h) == a.p(x);
            match (should, a.try_act(h, x)) {
                (true, Some(y)) => {
                    domain.case(true, String::new);
                    lands.case(a.p(y) == g.src(h), || {
                        format!("{h} ▷ {x} = {y} lies over {} instead of {}", a.p(y), g.src(h))
                    });
                }
                (true, None) => domain.fail(|| format!("{h} ▷ {x} undefined")),
                (false, Some(_)) => domain.fail(|| format!("{h} ▷ {x} defined but {h} does not end at {}", a.p(x))),
                (false, None) => {}
            }
        }
    }
    let mut unit = Check::new("identities act trivially", anchor);
    let mut comp = Check::new("compatible with composition", anchor);
    for x in a.elements() {
        let p = a.p(x);
        unit.case(a.try_act(g.identity(p), x) == Some(x), || format!("identity at {p} moves {x}"));
        for &h in g.arrows_into(p) {
            for &f in g.arrows_into(g.src(h)) {
                let lhs = a.try_act(h, x).and_then(|hx| a.try_act(f, hx));
                let rhs = g.try_compose(f, h).and_then(|fh| a.try_act(fh, x));
                comp.case(lhs.is_some() && lhs == rhs, || {
                    format!("{f} ▷ ({h} ▷ {x}) = {lhs:?} but ({f}{h}) ▷ {x} = {rhs:?}")
                });
            }
        }
    }
    for c in [domain, lands, unit, comp] {
        report.push(c);
    }
    report
}

/// `{g ▷ x : tgt(g) = p(x)}`, ascending.
pub fn orbit(a: &BundleAction, x: ElemId) -> Vec<ElemId> {
    let set: BTreeSet<ElemId> = a
        .actor()
        .arrows_into(a.p(x))
        .iter()
        .filter_map(|&g| a.try_act(g, x))
        .collect();
    set.into_iter().collect()
}

/// `{g : g ▷ x = x}`, ascending.
pub fn isotropy(a: &BundleAction, x: ElemId) -> Vec<ArrowId> {
    a.actor()
        .vertex_group(a.p(x))
        .into_iter()
        .filter(|&g| a.try_act(g, x) == Some(x))
        .collect()
}

/// Checks `|orbit(x)| = |component(p(x))| · |G(p(x))| / |isotropy(x)|`,
/// together with closure of the orbit and of the isotropy group.
pub fn orbit_count_identity(a: &BundleAction, x: ElemId) -> Report {
    let anchor = anchors::ORBIT_COUNTING;
    let g = a.actor();
    let p = a.p(x);
    let mut report = Report::new(format!("orbit counting at {x}"));
    let orb = orbit(a, x);
    let iso = isotropy(a, x);

    let mut sub = Check::new("isotropy is a subgroup", anchor);
    let sub_result = check_subgroup(g, p, &iso);
    sub.case(sub_result.is_ok(), || format!("{}", sub_result.as_ref().unwrap_err()));

    let mut closed = Check::new("orbit closed under the action", anchor);
    let members: BTreeSet<_> = orb.iter().copied().collect();
    for &y in &orb {
        for &h in g.arrows_into(a.p(y)) {
            closed.case(a.try_act(h, y).is_some_and(|z| members.contains(&z)), || {
                format!("{h} ▷ {y} leaves the orbit of {x}")
            });
        }
    }

    let mut count = Check::new("orbit size", anchor);
    let comp = component_of(g, p).len();
    let vertex = g.vertex_group(p).len();
    let lhs = orb.len() * iso.len();
    count.case(!iso.is_empty() && lhs == comp * vertex, || {
        format!(
            "|orbit| = {} but |component| · |vertex group| / |isotropy| = {comp} · {vertex} / {}",
            orb.len(),
            iso.len()
        )
    });
    report.push(sub);
    report.push(closed);
    report.push(count);
    report
}

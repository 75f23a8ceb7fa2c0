use super::{BoxFrame, BoxId, DoubleGroupoid};
use crate::groupoid::validate_groupoid;
use crate::report::{anchors, Check, Report};

/// Interchange is checked on every 2x2 square up to this many squares; beyond
/// it an evenly strided sample of this size is checked and a warning issued.
pub const INTERCHANGE_CAP: usize = 1_000_000;

/// Exhaustively checks the double groupoid axioms.
pub fn validate_double(d: &DoubleGroupoid) -> Report {
    let a = anchors::DOUBLE_AXIOMS;
    let (h, v) = (d.h(), d.v());
    let mut report = Report::new("double groupoid");
    report.absorb("H: ", validate_groupoid(h));
    report.absorb("V: ", validate_groupoid(v));
    if !report.passed() {
        // the remaining laws are phrased through the edge groupoids
        return report;
    }

    let mut corners = Check::new("sides meet at the four corners", a);
    for x in d.boxes() {
        corners.case(d.pi(x).matches(v, h), || format!("{x} has sides {} that do not close up", d.pi(x)));
    }

    let mut hdom = Check::new("horizontal composition defined exactly when right meets left", a);
    let mut hedge = Check::new("horizontal composition edge laws", a);
    let mut vdom = Check::new("vertical composition defined exactly when bottom meets top", a);
    let mut vedge = Check::new("vertical composition edge laws", a);
    for x in d.boxes() {
        for &y in d.boxes_with_left(d.r(x)) {
            match d.try_hcompose(x, y) {
                None => hdom.fail(|| format!("{x}{y} undefined although r({x}) = l({y})")),
                Some(z) => {
                    hdom.case(true, String::new);
                    let ok = d.l(z) == d.l(x)
                        && d.r(z) == d.r(y)
                        && h.try_compose(d.t(x), d.t(y)) == Some(d.t(z))
                        && h.try_compose(d.b(x), d.b(y)) == Some(d.b(z));
                    hedge.case(ok, || format!("{x}{y} = {z} has sides {}", d.pi(z)));
                }
            }
        }
        for &y in d.boxes_with_top(d.b(x)) {
            match d.try_vcompose(x, y) {
                None => vdom.fail(|| format!("{x}/{y} undefined although b({x}) = t({y})")),
                Some(z) => {
                    vdom.case(true, String::new);
                    let ok = d.t(z) == d.t(x)
                        && d.b(z) == d.b(y)
                        && v.try_compose(d.l(x), d.l(y)) == Some(d.l(z))
                        && v.try_compose(d.r(x), d.r(y)) == Some(d.r(z));
                    vedge.case(ok, || format!("{x}/{y} = {z} has sides {}", d.pi(z)));
                }
            }
        }
    }
    for (x, y, _) in d.hcompose_entries() {
        if d.r(x) != d.l(y) {
            hdom.fail(|| format!("{x}{y} defined although r({x}) != l({y})"));
        }
    }
    for (x, y, _) in d.vcompose_entries() {
        if d.b(x) != d.t(y) {
            vdom.fail(|| format!("{x}/{y} defined although b({x}) != t({y})"));
        }
    }

    let mut ids = Check::new("identity boxes have identity sides", a);
    for g in v.arrows() {
        let e = d.hid(g);
        let want = BoxFrame::new(h.identity(v.src(g)), g, g, h.identity(v.tgt(g)));
        ids.case(d.pi(e) == want, || format!("horizontal identity on {g} is {e} with sides {}", d.pi(e)));
    }
    for x in h.arrows() {
        let e = d.vid(x);
        let want = BoxFrame::new(x, v.identity(h.src(x)), v.identity(h.tgt(x)), x);
        ids.case(d.pi(e) == want, || format!("vertical identity on {x} is {e} with sides {}", d.pi(e)));
    }

    let mut theta = Check::new("the two identities agree on objects", a);
    for p in d.objects() {
        let (hb, vb) = (d.hid(v.identity(p)), d.vid(h.identity(p)));
        theta.case(hb == vb, || format!("at {p}: horizontal identity {hb}, vertical identity {vb}"));
    }

    let mut hunit = Check::new("horizontal identities are neutral", a);
    let mut vunit = Check::new("vertical identities are neutral", a);
    let mut hinv = Check::new("horizontal inverse law", a);
    let mut vinv = Check::new("vertical inverse law", a);
    for x in d.boxes() {
        let (il, ir) = (d.hid(d.l(x)), d.hid(d.r(x)));
        hunit.case(d.try_hcompose(il, x) == Some(x) && d.try_hcompose(x, ir) == Some(x), || {
            format!("horizontal identities do not fix {x}")
        });
        let (it, ib) = (d.vid(d.t(x)), d.vid(d.b(x)));
        vunit.case(d.try_vcompose(it, x) == Some(x) && d.try_vcompose(x, ib) == Some(x), || {
            format!("vertical identities do not fix {x}")
        });
        let xh = d.hinv(x);
        hinv.case(d.try_hcompose(x, xh) == Some(il) && d.try_hcompose(xh, x) == Some(ir), || {
            format!("{x} with horizontal inverse {xh}")
        });
        let xv = d.vinv(x);
        vinv.case(d.try_vcompose(x, xv) == Some(it) && d.try_vcompose(xv, x) == Some(ib), || {
            format!("{x} with vertical inverse {xv}")
        });
    }

    let mut idcomp = Check::new("identity boxes compose like their sides", a);
    for (g1, g2, g3) in v.compose_entries() {
        idcomp.case(d.try_vcompose(d.hid(g1), d.hid(g2)) == Some(d.hid(g3)), || {
            format!("identities on {g1} over {g2} do not give the identity on {g3}")
        });
    }
    for (x1, x2, x3) in h.compose_entries() {
        idcomp.case(d.try_hcompose(d.vid(x1), d.vid(x2)) == Some(d.vid(x3)), || {
            format!("identities on {x1} beside {x2} do not give the identity on {x3}")
        });
    }

    let mut hassoc = Check::new("horizontal associativity", a);
    let mut vassoc = Check::new("vertical associativity", a);
    for x in d.boxes() {
        for &y in d.boxes_with_left(d.r(x)) {
            for &z in d.boxes_with_left(d.r(y)) {
                let lhs = d.try_hcompose(x, y).and_then(|xy| d.try_hcompose(xy, z));
                let rhs = d.try_hcompose(y, z).and_then(|yz| d.try_hcompose(x, yz));
                hassoc.case(lhs.is_some() && lhs == rhs, || format!("({x}{y}){z} = {lhs:?}, {x}({y}{z}) = {rhs:?}"));
            }
        }
        for &y in d.boxes_with_top(d.b(x)) {
            for &z in d.boxes_with_top(d.b(y)) {
                let lhs = d.try_vcompose(x, y).and_then(|xy| d.try_vcompose(xy, z));
                let rhs = d.try_vcompose(y, z).and_then(|yz| d.try_vcompose(x, yz));
                vassoc.case(lhs.is_some() && lhs == rhs, || {
                    format!("({x}/{y})/{z} = {lhs:?}, {x}/({y}/{z}) = {rhs:?}")
                });
            }
        }
    }

    let interchange = check_interchange(d, &mut report.warnings);

    for c in [
        corners, hdom, hedge, vdom, vedge, ids, theta, hunit, vunit, hinv, vinv, idcomp, hassoc, vassoc,
        interchange,
    ] {
        report.push(c);
    }
    report
}

/// Visits every 2x2 square `[k l; m n]` in ascending order.
fn for_each_square(d: &DoubleGroupoid, mut f: impl FnMut(BoxId, BoxId, BoxId, BoxId)) {
    for k in d.boxes() {
        for &l in d.boxes_with_left(d.r(k)) {
            for &m in d.boxes_with_top(d.b(k)) {
                for &n in d.boxes_with_left(d.r(m)) {
                    if d.t(n) == d.b(l) {
                        f(k, l, m, n);
                    }
                }
            }
        }
    }
}

fn check_interchange(d: &DoubleGroupoid, warnings: &mut Vec<String>) -> Check {
    let mut check = Check::new("interchange law", anchors::INTERCHANGE);
    let mut total = 0usize;
    for_each_square(d, |_, _, _, _| total += 1);
    let stride = total.div_ceil(INTERCHANGE_CAP).max(1);
    if stride > 1 {
        warnings.push(format!(
            "interchange checked on every {stride}th of {total} squares (cap {INTERCHANGE_CAP})"
        ));
    }
    let mut i = 0usize;
    for_each_square(d, |k, l, m, n| {
        if i.is_multiple_of(stride) {
            let rows = match (d.try_hcompose(k, l), d.try_hcompose(m, n)) {
                (Some(kl), Some(mn)) => d.try_vcompose(kl, mn),
                _ => None,
            };
            let cols = match (d.try_vcompose(k, m), d.try_vcompose(l, n)) {
                (Some(km), Some(ln)) => d.try_hcompose(km, ln),
                _ => None,
            };
            check.case(rows.is_some() && rows == cols, || {
                format!("square [{k} {l}; {m} {n}]: rows first {rows:?}, columns first {cols:?}")
            });
        }
        i += 1;
    });
    check
}

/// Checks that `Π` carries every structure map of `d` to the sidewise one,
/// so the frame inherits a well-defined structure from any preimages.
pub fn check_frame_morphism(d: &DoubleGroupoid) -> Report {
    let a = anchors::FRAME;
    let (h, v) = (d.h(), d.v());
    let mut report = Report::new("frame map");
    let mut hc = Check::new("frame respects horizontal composition", a);
    let mut vc = Check::new("frame respects vertical composition", a);
    let mut inv = Check::new("frame respects inverses", a);
    let mut entries: Vec<_> = d.hcompose_entries().collect();
    entries.sort_unstable();
    for (x, y, z) in entries {
        let want = h
            .try_compose(d.t(x), d.t(y))
            .zip(h.try_compose(d.b(x), d.b(y)))
            .map(|(t, b)| BoxFrame::new(t, d.l(x), d.r(y), b));
        hc.case(want == Some(d.pi(z)), || format!("{x}{y} = {z} has frame {}, sidewise {want:?}", d.pi(z)));
    }
    let mut entries: Vec<_> = d.vcompose_entries().collect();
    entries.sort_unstable();
    for (x, y, z) in entries {
        let want = v
            .try_compose(d.l(x), d.l(y))
            .zip(v.try_compose(d.r(x), d.r(y)))
            .map(|(l, r)| BoxFrame::new(d.t(x), l, r, d.b(y)));
        vc.case(want == Some(d.pi(z)), || format!("{x}/{y} = {z} has frame {}, sidewise {want:?}", d.pi(z)));
    }
    for x in d.boxes() {
        let fx = d.pi(x);
        let hw = BoxFrame::new(h.inverse(fx.x), fx.g, fx.f, h.inverse(fx.y));
        let vw = BoxFrame::new(fx.y, v.inverse(fx.f), v.inverse(fx.g), fx.x);
        inv.case(d.pi(d.hinv(x)) == hw && d.pi(d.vinv(x)) == vw, || {
            format!("inverses of {x} have frames {} and {}", d.pi(d.hinv(x)), d.pi(d.vinv(x)))
        });
    }
    report.push(hc);
    report.push(vc);
    report.push(inv);
    report
}

//! The nine acceptance criteria, one PASS/FAIL line each. Exits nonzero if
//! any criterion fails.

use std::process::ExitCode;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dgk_core::diagonal::{
    diagonal, is_fusion, j_closure_oracle, pair_model, roundtrip_diagram, roundtrip_slim, FactorizationDiagram,
};
use dgk_core::double::{corner_facts, frame, has_filling, is_vacant, validate_double, DoubleGroupoid};
use dgk_core::extension::{build_extension, decompose, psi_check, validate_cocycle_equations};
use dgk_core::fixtures;
use dgk_core::groupoid::{groupoid_iso, FiniteGroupoid};
use dgk_core::iso::{check_double_morphism, identity_edges};
use dgk_core::kernel::{core, corner_formula, frame_core_sequence};
use dgk_core::words::{check_length_additivity, FreeProduct, ReducedWord};
use dgk_core::{Error, Report};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn require(report: &Report, what: &str) -> Result<(), String> {
    if report.passed() {
        Ok(())
    } else {
        Err(format!("{what}:\n{report}"))
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn axiom_suite() -> Outcome {
    let mut total = 0;
    for (name, d) in fixtures::all() {
        require(&validate_double(&d), name)?;
        let muts = fixtures::mutations(&d, 20, 0x5eed);
        if muts.len() != 20 {
            return Err(format!("{name}: only {} mutations", muts.len()));
        }
        for m in muts {
            let dm = DoubleGroupoid::from_parts(m.parts).map_err(|e| format!("{name}, {}: {e}", m.description))?;
            let r = validate_double(&dm);
            let caught = r.failed().any(|c| !c.witnesses.is_empty());
            if !caught {
                return Err(format!("{name}: mutation {} not detected", m.description));
            }
            total += 1;
        }
    }
    Ok(format!("5 fixtures valid, all {total} mutations caught with a witness"))
}

fn extension_roundtrip() -> Outcome {
    for (name, d) in fixtures::all() {
        let dec = decompose(&d).map_err(err)?;
        require(&validate_cocycle_equations(&dec.data), &format!("{name}: cocycle equations"))?;
        let built = build_extension(&dec.data).map_err(err)?;
        let psi = dec.psi(&d).map_err(err)?;
        let witness = identity_edges(&built, psi);
        require(&check_double_morphism(&built, &d, &witness), &format!("{name}: witness"))?;
    }
    Ok("all fixtures rebuilt, explicit witness is an isomorphism".into())
}

fn frame_kernel_counting() -> Outcome {
    let mut lines = Vec::new();
    for (name, d) in fixtures::all() {
        let dec = decompose(&d).map_err(err)?;
        require(&psi_check(&d, &dec).map_err(err)?, name)?;
        let f = &dec.data.frame;
        let sizes: Vec<usize> = f.boxes().map(|x| dec.data.bundle.fiber(f.bl(x)).len()).collect();
        let expected = match name {
            "A2" => Some((2, 1, 2)),
            "EXT1" => Some((32, 16, 2)),
            _ => None,
        };
        match expected {
            Some((boxes, frames, fiber)) => {
                if d.len() != boxes || f.len() != frames || sizes.iter().any(|&s| s != fiber) {
                    return Err(format!("{name}: {} boxes over {} frames, fibers {sizes:?}", d.len(), f.len()));
                }
            }
            None => {
                if d.len() != f.len() {
                    return Err(format!("{name}: slim but {} boxes vs {} frames", d.len(), f.len()));
                }
            }
        }
        lines.push(format!("{name} {}", d.len()));
    }
    Ok(lines.join(", "))
}

fn slim_roundtrips() -> Outcome {
    for (name, d) in [("CPAIR2", fixtures::cpair2()), ("CPAIR3", fixtures::cpair3()), ("S3F", fixtures::s3f())] {
        require(&roundtrip_slim(&d).map_err(err)?, name)?;
    }
    for (name, dg) in [
        ("pair diagram on 2", fixtures::pair_diagram(2)),
        ("pair diagram on 3", fixtures::pair_diagram(3)),
        ("S3 diagram", fixtures::s3_diagram()),
    ] {
        let fd = FactorizationDiagram::verify(dg).map_err(err)?;
        require(&roundtrip_diagram(&fd).map_err(err)?, name)?;
    }
    let d2 = diagonal(&fixtures::cpair2()).map_err(err)?.into_diagram().d;
    if d2.arrow_count() != 4 || groupoid_iso(&d2, &FiniteGroupoid::pair(2)).is_none() {
        return Err(format!("diagonal of CPAIR2 has {} arrows", d2.arrow_count()));
    }
    let ds = diagonal(&fixtures::s3f()).map_err(err)?.into_diagram().d;
    if ds.arrow_count() != 6 || ds.objects() != 1 || groupoid_iso(&ds, &fixtures::s3()).is_none() {
        return Err(format!("diagonal of S3F has {} arrows over {} objects", ds.arrow_count(), ds.objects()));
    }
    Ok("both directions on all cases; 4 and 6 arrows".into())
}

fn well_definedness() -> Outcome {
    let law = "product independent of representatives and filling boxes";
    let mut cases = 0;
    for (name, d) in fixtures::all() {
        // non-slim fixtures are checked through their frame
        let target = if d.is_slim() { d.clone() } else { frame(&d).map_err(err)? };
        let pm = pair_model(&target).map_err(err)?;
        let c = pm.report.check(law).ok_or_else(|| format!("{name}: no {law} check"))?;
        if !c.passed() {
            return Err(format!("{name}:\n{}", pm.report));
        }
        cases += c.cases;
    }
    let cp = fixtures::cpair2();
    for x in cp.h().arrows() {
        for &g in cp.v().arrows_from(cp.h().tgt(x)) {
            let n = cp.ur_set(x, g).map_err(err)?.len();
            if n != 2 {
                return Err(format!("CPAIR2: {n} fillings for ({x}, {g})"));
            }
        }
    }
    Ok(format!("{cases} (representatives, filling) choices agree"))
}

fn corner_counting() -> Outcome {
    for (name, d) in fixtures::all() {
        require(&corner_formula(&d).map_err(err)?, name)?;
        require(&corner_facts(&d), name)?;
        let trivial_core = core(&d).map_err(err)?.boxes.len() == d.base();
        if is_vacant(&d) != trivial_core {
            return Err(format!("{name}: vacant = {}, trivial core = {trivial_core}", is_vacant(&d)));
        }
        let expect_vacant = match name {
            "S3F" => Some(true),
            "A2" | "CPAIR2" => Some(false),
            _ => None,
        };
        if expect_vacant.is_some_and(|v| v != is_vacant(&d)) {
            return Err(format!("{name}: vacant = {}", is_vacant(&d)));
        }
    }
    Ok("formula and corner facts on every box of every fixture".into())
}

fn rewriting() -> Outcome {
    let mut samples = 0;
    for (name, d) in fixtures::all() {
        let fp = FreeProduct::of(&d);
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..200 {
            let start = d.objects().nth(rng.gen_range(0..d.base())).unwrap();
            let len = rng.gen_range(0..=10);
            let path = fp.random_path(start, len, &mut rng);
            let normal = fp.reduce(&path).map_err(err)?;
            if !fp.is_reduced(&normal) {
                return Err(format!("{name}: {normal} is not reduced"));
            }
            for _ in 0..10 {
                let other = fp.reduce_with_schedule(&path, &mut rng).map_err(err)?;
                if other != normal {
                    return Err(format!("{name}: normal forms {normal} and {other} disagree"));
                }
                samples += 1;
            }
        }
    }
    let mut broken = Vec::new();
    for (name, d) in fixtures::all() {
        let fp = FreeProduct::of(&d);
        let words: Vec<ReducedWord> = (1..=4).flat_map(|n| fp.reduced_words_of_length(n)).collect();
        let report = check_length_additivity(&fp, &words).map_err(err)?;
        for c in report.failed() {
            let first = c.witnesses.first().cloned().unwrap_or_default();
            broken.push(format!("{name}: {} ({} of {} cases, e.g. {first})", c.law, c.failures, c.cases));
        }
    }
    if broken.is_empty() {
        Ok(format!("{samples} samples confluent, length rule holds"))
    } else {
        Err(format!("{samples} samples confluent; length rule fails\n  {}", broken.join("\n  ")))
    }
}

fn fusion_suite() -> Outcome {
    for (name, d) in fixtures::all() {
        if !has_filling(&d) {
            continue;
        }
        let (fusion, report) = is_fusion(&d).map_err(err)?;
        require(&report, name)?;
        let expected = match name {
            "S3F" | "CPAIR2" => Some(true),
            "A2" => Some(false),
            _ => None,
        };
        if expected.is_some_and(|e| e != fusion) {
            return Err(format!("{name}: fusion = {fusion}"));
        }
        require(&frame_core_sequence(&d).map_err(err)?, &format!("{name}: exact sequence"))?;
    }
    Ok("verdicts, equivalence and exact sequence on every filling fixture".into())
}

fn oracle_consistency() -> Outcome {
    let mut words_checked = 0;
    for (name, d) in [("S3F", fixtures::s3f()), ("CPAIR2", fixtures::cpair2())] {
        let pm = pair_model(&d).map_err(err)?;
        let fp = FreeProduct::of(&d);
        for n in 0..=2 {
            for w in fp.reduced_words_of_length(n) {
                let loop_ = fp.end(&w) == w.start();
                let trivial = loop_ && pm.diagram.d.is_identity(pm.evaluate(&w));
                let found = j_closure_oracle(&d, &w, 3).map_err(err)?;
                if trivial != found {
                    return Err(format!("{name}: {w} is trivial = {trivial}, oracle = {found}"));
                }
                words_checked += 1;
            }
        }
    }
    Ok(format!("{words_checked} words agree"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 axiom suite", axiom_suite),
        ("2 extension round trip", extension_roundtrip),
        ("3 kernel times frame counting", frame_kernel_counting),
        ("4 slim round trips", slim_roundtrips),
        ("5 well-definedness stress", well_definedness),
        ("6 corner counting", corner_counting),
        ("7 rewriting suite", rewriting),
        ("8 fusion suite", fusion_suite),
        ("9 oracle consistency", oracle_consistency),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} of 9 criteria failed");
        ExitCode::FAILURE
    }
}

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use dgk_core::diagonal::{diagonal, is_fusion, roundtrip_diagram, roundtrip_slim, square_of_diagram, FactorizationDiagram};
use dgk_core::double::{corner_facts, corners, frame, has_filling, is_vacant, transitivity, validate_double, DoubleGroupoid};
use dgk_core::extension::{build_extension, decompose, psi_check, validate_cocycle_equations};
use dgk_core::format::{
    emit_bundle, emit_double, emit_extension, emit_diagram, emit_groupoid, emit_json, load_bundle, load_diagram, load_double,
    load_extension, load_groupoid,
};
use dgk_core::groupoid::{component_of, validate_bundle, validate_groupoid, ObjectId};
use dgk_core::iso::{check_double_morphism, identity_edges};
use dgk_core::kernel::{core, corner_formula, kernel, CoreGroupoid};
use dgk_core::report::anchors;
use dgk_core::words::{parse_letters, FreeProduct, Path as LetterPath};
use dgk_core::{fixtures, Error, Report, Result};

use crate::{Cli, Outcome, Verb};

enum Kind {
    Groupoid,
    Bundle,
    Double,
    Extension,
    Diagram,
}

/// Guesses the file format from its top-level keys. Unparseable text is
/// reported by the double groupoid loader, which carries line and column.
fn kind(text: &str) -> Result<Kind> {
    let value: serde_json::Value = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(_) => return load_double(text, false).map(|_| Kind::Double),
    };
    let has = |k: &str| value.get(k).is_some();
    Ok(if has("frame") {
        Kind::Extension
    } else if has("D") {
        Kind::Diagram
    } else if has("boxes") {
        Kind::Double
    } else if has("fiber") {
        Kind::Bundle
    } else if has("arrows") {
        Kind::Groupoid
    } else {
        return Err(Error::Format {
            context: "top level".into(),
            message: "not a groupoid, bundle, double groupoid, extension or diagram file".into(),
        });
    })
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Format {
        context: path.display().to_string(),
        message: e.to_string(),
    })
}

fn data(text: String) -> Result<Outcome> {
    Ok(Outcome { text, report: None })
}

fn checked(cli: &Cli, report: Report) -> Result<Outcome> {
    let text = if cli.json { emit_json(&report) } else { report.to_string() };
    Ok(Outcome {
        text,
        report: Some(report),
    })
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let validate = !cli.no_validate;
    let double = |p: &Path| load_double(&read(p)?, validate);
    match &cli.verb {
        Verb::Validate { file } => checked(cli, validate_file(&read(file)?)?),
        Verb::Analyze { file } => analyze(cli, &double(file)?),
        Verb::Frame { file } => data(emit_double(&frame(&double(file)?)?)),
        Verb::Core { file } => data(emit_groupoid(&core(&double(file)?)?.groupoid)),
        Verb::Kernel { file } => data(emit_bundle(&kernel(&double(file)?)?.bundle)),
        Verb::Corners { file } => corner_table(&double(file)?),
        Verb::Decompose { file } => data(emit_extension(&decompose(&double(file)?)?.data)),
        Verb::Rebuild { file } => {
            let e = load_extension(&read(file)?)?;
            if validate {
                validate_cocycle_equations(&e).into_result()?;
            }
            data(emit_double(&build_extension(&e)?))
        }
        Verb::Roundtrip { file } => checked(cli, roundtrip(&double(file)?)?),
        Verb::Diagonal { file } => data(emit_diagram(diagonal(&double(file)?)?.diagram())),
        Verb::Square { file } => {
            let dg = load_diagram(&read(file)?, validate)?;
            let fd = FactorizationDiagram::verify(dg)?;
            data(emit_double(&square_of_diagram(fd.diagram())?))
        }
        Verb::RoundtripSlim { file } => {
            let text = read(file)?;
            let report = match kind(&text)? {
                Kind::Diagram => roundtrip_diagram(&FactorizationDiagram::verify(load_diagram(&text, validate)?)?)?,
                _ => roundtrip_slim(&load_double(&text, validate)?)?,
            };
            checked(cli, report)
        }
        Verb::Classify { file } => classify(cli, &double(file)?),
        Verb::Reduce { word, at, file } => reduce(cli, &double(file)?, word, *at),
        Verb::Fixtures { emit_all, name } => emit_fixtures(cli, *emit_all, name.as_deref()),
    }
}

fn validate_file(text: &str) -> Result<Report> {
    Ok(match kind(text)? {
        Kind::Groupoid => validate_groupoid(&load_groupoid(text, false)?),
        Kind::Bundle => validate_bundle(&load_bundle(text, false)?),
        Kind::Double => validate_double(&load_double(text, false)?),
        Kind::Extension => {
            let e = load_extension(text)?;
            let mut report = validate_double(&e.frame);
            report.absorb("", validate_cocycle_equations(&e));
            report
        }
        Kind::Diagram => {
            let dg = load_diagram(text, false)?;
            let mut report = dg.validate();
            if report.passed() {
                report.absorb("", dg.check_factorization());
            }
            report
        }
    })
}

fn roundtrip(d: &DoubleGroupoid) -> Result<Report> {
    let dec = decompose(d)?;
    let mut report = Report::new("decompose, rebuild and compare");
    report.absorb("", validate_cocycle_equations(&dec.data));
    report.absorb("", psi_check(d, &dec)?);
    let built = build_extension(&dec.data)?;
    let witness = identity_edges(&built, dec.psi(d)?);
    report.absorb("rebuilt to original: ", check_double_morphism(&built, d, &witness));
    Ok(report)
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[derive(Serialize)]
struct CornerRow {
    #[serde(rename = "box")]
    id: usize,
    formula: usize,
    lower_left: usize,
    lower_right: usize,
    upper_left: usize,
    upper_right: usize,
}

#[derive(Serialize)]
struct CornerTable {
    boxes: Vec<CornerRow>,
    theta: Vec<usize>,
}

fn corner_rows(d: &DoubleGroupoid, e: &CoreGroupoid) -> CornerTable {
    let c = corners(d);
    let predicted = |q: ObjectId| component_of(&e.groupoid, q).len() * e.groupoid.vertex_group(q).len();
    let boxes = d
        .boxes()
        .map(|b| {
            let k = c.boxes[b.0];
            CornerRow {
                id: b.0,
                formula: predicted(d.bl(b)),
                lower_left: k.lower_left,
                lower_right: k.lower_right,
                upper_left: k.upper_left,
                upper_right: k.upper_right,
            }
        })
        .collect();
    CornerTable { boxes, theta: c.theta }
}

fn corner_table(d: &DoubleGroupoid) -> Result<Outcome> {
    let table = corner_rows(d, &core(d)?);
    Ok(Outcome {
        text: emit_json(&table),
        report: Some(corner_formula(d)?),
    })
}

#[derive(Serialize)]
struct Analysis {
    base: usize,
    boxes: usize,
    corners: CornerTable,
    filling: bool,
    horizontal_transitive: bool,
    report: Report,
    slim: bool,
    vacant: bool,
    vertical_transitive: bool,
}

fn analyze(cli: &Cli, d: &DoubleGroupoid) -> Result<Outcome> {
    let e = core(d)?;
    let t = transitivity(d);
    let mut report = corner_formula(d)?;
    report.absorb("", corner_facts(d));
    let a = Analysis {
        base: d.base(),
        boxes: d.len(),
        corners: corner_rows(d, &e),
        filling: has_filling(d),
        horizontal_transitive: t.horizontal,
        report,
        slim: d.is_slim(),
        vacant: is_vacant(d),
        vertical_transitive: t.vertical,
    };
    let text = if cli.json { emit_json(&a) } else { render_analysis(&a) };
    Ok(Outcome {
        text,
        report: Some(a.report),
    })
}

fn render_analysis(a: &Analysis) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "objects {}, boxes {}", a.base, a.boxes);
    let flags = [
        ("slim", a.slim, anchors::FRAME),
        ("filling", a.filling, anchors::CORE_ACTION),
        ("vacant", a.vacant, anchors::CORNER_FORMULA),
        ("horizontally transitive", a.horizontal_transitive, anchors::DOUBLE_AXIOMS),
        ("vertically transitive", a.vertical_transitive, anchors::DOUBLE_AXIOMS),
    ];
    for (name, value, anchor) in flags {
        let _ = writeln!(s, "  {name:<24} {:<4} [{anchor}]", yes(value));
    }
    let _ = writeln!(s, "corners [{}]", anchors::CORNER_FORMULA);
    let _ = writeln!(s, "  {:>5} {:>5} {:>5} {:>5} {:>5} {:>7}", "box", "ur", "ul", "ll", "lr", "formula");
    for r in &a.corners.boxes {
        let _ = writeln!(
            s,
            "  {:>5} {:>5} {:>5} {:>5} {:>5} {:>7}",
            r.id, r.upper_right, r.upper_left, r.lower_left, r.lower_right, r.formula
        );
    }
    let _ = writeln!(s, "theta [{}]", anchors::CORNER_FORMULA);
    for (p, t) in a.corners.theta.iter().enumerate() {
        let _ = writeln!(s, "  P{p:<4} {t:>5}");
    }
    s.push_str(&a.report.to_string());
    s
}

#[derive(Serialize)]
struct Classification {
    filling: bool,
    fusion: Option<bool>,
    report: Option<Report>,
    slim: bool,
    vacant: bool,
}

fn classify(cli: &Cli, d: &DoubleGroupoid) -> Result<Outcome> {
    let filling = has_filling(d);
    let (fusion, report) = if filling {
        let (f, r) = is_fusion(d)?;
        (Some(f), Some(r))
    } else {
        (None, None)
    };
    let c = Classification {
        filling,
        fusion,
        report,
        slim: d.is_slim(),
        vacant: is_vacant(d),
    };
    let text = if cli.json {
        emit_json(&c)
    } else {
        let mut s = String::new();
        let fusion = c.fusion.map_or("n/a (no filling)", yes);
        let rows = [
            ("slim", yes(c.slim), anchors::FRAME),
            ("filling", yes(c.filling), anchors::CORE_ACTION),
            ("vacant", yes(c.vacant), anchors::CORNER_FORMULA),
            ("fusion", fusion, anchors::FUSION),
        ];
        for (name, value, anchor) in rows {
            let _ = writeln!(s, "{name:<8} {value:<17} [{anchor}]");
        }
        if let Some(r) = &c.report {
            s.push_str(&r.to_string());
        }
        s
    };
    Ok(Outcome { text, report: c.report })
}

#[derive(Serialize)]
struct Reduction {
    input: String,
    length: usize,
    reduced: String,
}

fn reduce(cli: &Cli, d: &DoubleGroupoid, word: &str, at: Option<usize>) -> Result<Outcome> {
    let fp = FreeProduct::of(d);
    let letters = parse_letters(word)?;
    let start = match (at, letters.first()) {
        (Some(p), _) => ObjectId(p),
        (None, Some(&l)) => {
            let n = match l.tag {
                dgk_core::words::Tag::H => d.h().arrow_count(),
                dgk_core::words::Tag::V => d.v().arrow_count(),
            };
            if l.arrow.0 >= n {
                return Err(Error::NotChained(format!("letter 0 ({l}) is not an arrow")));
            }
            fp.src(l)
        }
        (None, None) => return Err(Error::NotChained("the empty word needs --at".into())),
    };
    let w = fp.reduce(&LetterPath { start, letters })?;
    let r = Reduction {
        input: word.split_whitespace().collect::<Vec<_>>().join(" "),
        length: w.len(),
        reduced: w.to_string(),
    };
    let text = if cli.json {
        emit_json(&r)
    } else {
        format!("{} -> {} (length {})\n", r.input, r.reduced, r.length)
    };
    data(text)
}

fn emit_fixtures(cli: &Cli, emit_all: bool, name: Option<&str>) -> Result<Outcome> {
    if emit_all {
        let dir = cli.output.as_deref().ok_or_else(|| Error::Format {
            context: "-o".into(),
            message: "--emit-all needs an output directory".into(),
        })?;
        fs::create_dir_all(dir)?;
        let mut listing = String::new();
        for (name, d) in fixtures::all() {
            let path = dir.join(format!("{name}.json"));
            fs::write(&path, emit_double(&d))?;
            let _ = writeln!(listing, "{}", path.display());
        }
        return data(listing);
    }
    match name {
        Some(n) => match fixtures::by_name(n) {
            Some(d) => {
                let text = emit_double(&d);
                if let Some(p) = cli.output.as_deref() {
                    fs::write(p, &text)?;
                    data(String::new())
                } else {
                    data(text)
                }
            }
            None => Err(Error::Format {
                context: "fixture".into(),
                message: format!("unknown fixture {n}; known: A2, CPAIR2, CPAIR3, S3F, EXT1"),
            }),
        },
        None => data(fixtures::all().iter().map(|(n, _)| format!("{n}\n")).collect()),
    }
}

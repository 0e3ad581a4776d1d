//! Command-line front end. Every subcommand parses JSON arguments, calls
//! one library entry point, and prints one JSON object per line (CSV for
//! `emit-profile` and `verify-partition`). Exit codes: 0 on success, 1 on a
//! domain error (named on stderr), 2 on usage errors.

use clap::{Parser, Subcommand};
use num_traits::Signed;
use serde_json::json;
use std::io::Write;

use zonospline::arrangement;
use zonospline::boxspline;
use zonospline::deconv;
use zonospline::directions::{
    any_representation, center_representation, DirectionList, LatticeFunction, ParameterList,
    Representation,
};
use zonospline::io;
use zonospline::partition;
use zonospline::rat::{format_rat, parse_rat, rat, rat_to_f64, Rat, RationalVector, QComplex};
use zonospline::torus;

#[derive(Parser)]
#[command(name = "zonospline", version, about = "box splines, Todd-operator deconvolution, partition functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the (possibly translated) box spline at a rational point.
    EvalBox {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        at: String,
        #[arg(long)]
        y: Option<String>,
        #[arg(long)]
        r: Option<String>,
    },
    /// Partition count (or weighted trace with --y) at a lattice point.
    #[command(alias = "partition")]
    EvalPartition {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        at: String,
        #[arg(long)]
        y: Option<String>,
    },
    /// Recover f at a lattice point from its semi-discrete convolution.
    Deconvolve {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        at: String,
        #[arg(long)]
        y: Option<String>,
        #[arg(long)]
        eps: Option<String>,
        #[arg(long)]
        r: Option<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// The vertex set of the torus, as exact angle fractions.
    VertexSet {
        #[arg(long)]
        phi: String,
    },
    /// Primitive wall normals of the arrangement.
    Walls {
        #[arg(long)]
        phi: String,
    },
    /// Alcove (slab indices) of a regular rational point.
    AlcoveOf {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        at: String,
    },
    /// Seeded verification suites; prints one pass/fail line per case.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        phi: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// CSV comparison of brute-force counts against the Todd formula.
    VerifyPartition {
        #[arg(long)]
        phi: String,
        #[arg(long, default_value_t = 8)]
        window: i64,
        #[arg(long)]
        y: Option<String>,
        #[arg(long)]
        out: Option<String>,
    },
    /// CSV profile of a (translated) 1-D box spline.
    EmitProfile {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        r: Option<String>,
        #[arg(long)]
        y: Option<String>,
        #[arg(long)]
        step: Option<String>,
        #[arg(long)]
        range: Option<String>,
        #[arg(long)]
        out: Option<String>,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => {}
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(1);
        }
    }
}

fn run(command: Command) -> zonospline::Result<()> {
    match command {
        Command::EvalBox { phi, at, y, r } => {
            let phi = io::parse_phi(&phi)?;
            let at = io::parse_rational_vector(&at)?;
            let rrep = parse_representation(&phi, r.as_deref())?;
            match y {
                None => {
                    let value = match &rrep {
                        Some(rep) => boxspline::eval_translated_exact(&phi, rep, &at)?,
                        None => boxspline::eval_exact(&phi, &at)?,
                    };
                    println!("{}", io::exact_value_json(&value));
                }
                Some(y) => {
                    let y = io::parse_parameters(&y, phi.len())?;
                    let value = match &rrep {
                        Some(rep) => boxspline::eval_translated(&phi, &y, rep, &at)?,
                        None => boxspline::eval(&phi, &y, &at)?,
                    };
                    println!("{}", io::complex_value_json(value));
                }
            }
        }
        Command::EvalPartition { phi, at, y } => {
            let phi = io::parse_phi(&phi)?;
            let nu = io::parse_lattice_point(&at)?;
            match y {
                None => {
                    let count = partition::partition_count(&phi, &nu)?;
                    println!("{}", json!({ "nu": nu, "value": count.to_string(), "exact": true }));
                }
                Some(y) => {
                    let y = io::parse_parameters(&y, phi.len())?;
                    let trace = partition::partition_trace(&phi, &y, &nu)?;
                    println!(
                        "{}",
                        json!({ "nu": nu, "value_re": trace.re, "value_im": trace.im, "exact": false })
                    );
                }
            }
        }
        Command::Deconvolve { phi, f, at, y, eps, r, seed } => {
            let phi = io::parse_phi(&phi)?;
            let f = io::parse_lattice_function(&f)?;
            let lambda = io::parse_lattice_point(&at)?;
            let rrep = parse_representation(&phi, r.as_deref())?;
            let eps = match eps {
                Some(text) => io::parse_rational_vector(&text)?,
                None => {
                    let anchor = rrep
                        .clone()
                        .unwrap_or_else(|| Representation::zero(&phi));
                    arrangement::generic_direction(&phi, seed, Some(&anchor))?
                }
            };
            match y {
                None => {
                    let value = match &rrep {
                        Some(rep) => {
                            deconv::deconvolve_translated_exact(&phi, rep, &f, &lambda, &eps)?
                        }
                        None => deconv::deconvolve_exact(&phi, &f, &lambda, &eps)?,
                    };
                    let mut record = io::cyc_value_json(&value);
                    record["lambda"] = json!(lambda);
                    println!("{record}");
                }
                Some(y) => {
                    let y = io::parse_parameters(&y, phi.len())?;
                    let value = match &rrep {
                        Some(rep) => {
                            deconv::deconvolve_translated(&phi, &y, rep, &f, &lambda, &eps)?
                        }
                        None => deconv::deconvolve(&phi, &y, &f, &lambda, &eps)?,
                    };
                    let mut record = io::complex_value_json(value);
                    record["lambda"] = json!(lambda);
                    println!("{record}");
                }
            }
        }
        Command::VertexSet { phi } => {
            let phi = io::parse_phi(&phi)?;
            let vs = torus::vertex_set(&phi)?;
            let angles: Vec<Vec<String>> = vs
                .iter()
                .map(|s| s.angle().iter().map(format_rat).collect())
                .collect();
            println!("{}", json!({ "angles": angles }));
        }
        Command::Walls { phi } => {
            let phi = io::parse_phi(&phi)?;
            let walls: Vec<Vec<i64>> = arrangement::walls(&phi)?
                .into_iter()
                .map(|w| w.normal)
                .collect();
            println!("{}", json!({ "normals": walls }));
        }
        Command::AlcoveOf { phi, at } => {
            let phi = io::parse_phi(&phi)?;
            let at = io::parse_rational_vector(&at)?;
            let alcove = arrangement::alcove_of(&phi, &at)?;
            let slabs: Vec<serde_json::Value> = alcove
                .slabs
                .iter()
                .map(|(n, s)| json!({ "normal": n, "index": s.to_string() }))
                .collect();
            println!(
                "{}",
                json!({ "witness": io::rational_vector_to_json(&at), "slabs": slabs })
            );
        }
        Command::Verify { suite, phi, seed } => {
            let phi = io::parse_phi(&phi)?;
            let failures = run_suite(&suite, &phi, seed)?;
            if failures > 0 {
                eprintln!("error: {failures} case(s) failed in suite {suite}");
                std::process::exit(1);
            }
        }
        Command::VerifyPartition { phi, window, y, out } => {
            let phi = io::parse_phi(&phi)?;
            let y = match y {
                Some(text) => Some(io::parse_parameters(&text, phi.len())?),
                None => None,
            };
            let csv = verify_partition_csv(&phi, window, y.as_ref())?;
            write_output(out.as_deref(), &csv)?;
        }
        Command::EmitProfile { phi, r, y, step, range, out } => {
            let phi = io::parse_phi(&phi)?;
            let rrep = parse_representation(&phi, r.as_deref())?
                .unwrap_or_else(|| Representation::zero(&phi));
            let y = match y {
                Some(text) => Some(io::parse_parameters(&text, phi.len())?),
                None => None,
            };
            let step = match step {
                Some(s) => parse_rat(&s)?,
                None => rat(1, 10),
            };
            let range = match range {
                Some(text) => {
                    let (a, b) = text
                        .split_once(',')
                        .ok_or_else(|| zonospline::Error::Parse("range needs a,b".into()))?;
                    Some((parse_rat(a)?, parse_rat(b)?))
                }
                None => None,
            };
            let csv = emit_profile_csv(&phi, &rrep, y.as_ref(), &step, range)?;
            write_output(out.as_deref(), &csv)?;
        }
    }
    Ok(())
}

fn parse_representation(
    phi: &DirectionList,
    text: Option<&str>,
) -> zonospline::Result<Option<Representation>> {
    let Some(text) = text else { return Ok(None) };
    let trimmed = text.trim();
    // an entry list ["1/2","1/2"], the point "3/2" (resolved by LP), or "center"
    if trimmed == "center" {
        return Ok(Some(center_representation(phi)));
    }
    if trimmed.starts_with('[') {
        let parts: Vec<String> = serde_json::from_str(trimmed)
            .map_err(|e| zonospline::Error::Parse(format!("representation: {e}")))?;
        if parts.len() == phi.len() {
            let entries = parts
                .iter()
                .map(|p| parse_rat(p))
                .collect::<zonospline::Result<Vec<Rat>>>()?;
            return Ok(Some(Representation::new(entries)));
        }
    }
    let point = io::parse_rational_vector(trimmed)?;
    Ok(Some(any_representation(phi, &point)?))
}

fn write_output(path: Option<&str>, content: &str) -> zonospline::Result<()> {
    match path {
        Some(path) => {
            let mut file = std::fs::File::create(path)
                .map_err(|e| zonospline::Error::Parse(format!("cannot open {path}: {e}")))?;
            file.write_all(content.as_bytes())
                .map_err(|e| zonospline::Error::Parse(format!("write {path}: {e}")))?;
        }
        None => print!("{content}"),
    }
    Ok(())
}

/// The CSV behind the translated-profile figures: rows `t,value` sampled at
/// a rational step, with non-regular abscissas nudged forward by half the
/// gap to the next affine wall.
fn emit_profile_csv(
    phi: &DirectionList,
    rrep: &Representation,
    y: Option<&ParameterList>,
    step: &Rat,
    range: Option<(Rat, Rat)>,
) -> zonospline::Result<String> {
    if phi.dim != 1 {
        return Err(zonospline::Error::Not1D);
    }
    let (lo, hi) = match range {
        Some(r) => r,
        None => boxspline::support_interval_1d(phi, rrep)?,
    };
    let mut out = String::from("t,value_re,value_im,exact\n");
    let plus = RationalVector::new(vec![rat(1, 1)]);
    let mut t = lo.clone();
    while t < hi {
        let point = RationalVector::new(vec![t.clone()]);
        let shifted = point.add_scaled(&Rat::from_integer(1.into()), &rrep.point(phi));
        let sample = if arrangement::is_regular(phi, &shifted)? {
            point
        } else {
            // nudge onto the eps side: half the gap to the next wall
            let limit = arrangement::limit_point(phi, &shifted, &plus)?;
            &limit - &rrep.point(phi)
        };
        match y {
            None => {
                let value = boxspline::eval_translated_exact(phi, rrep, &sample)?;
                out.push_str(&format!(
                    "{},{},0,true\n",
                    format_rat(&sample.coords[0]),
                    format_rat(&value)
                ));
            }
            Some(y) => {
                let value = boxspline::eval_translated(phi, y, rrep, &sample)?;
                out.push_str(&format!(
                    "{},{},{},false\n",
                    rat_to_f64(&sample.coords[0]),
                    value.re,
                    value.im
                ));
            }
        }
        t += step;
    }
    Ok(out)
}

fn verify_partition_csv(
    phi: &DirectionList,
    window: i64,
    y: Option<&ParameterList>,
) -> zonospline::Result<String> {
    let mut out = String::from("nu,brute_force,todd_formula,match\n");
    let witnesses = chamber_witnesses(phi)?;
    let mut points: Vec<Vec<i64>> = Vec::new();
    lattice_window(phi.dim, window, &mut vec![], &mut points);
    for witness in &witnesses {
        let tau = partition::chamber_of(phi, witness)?;
        for nu in &points {
            if !partition::chamber_covers(phi, &tau, nu)? {
                continue;
            }
            match y {
                None => {
                    let brute = partition::partition_count(phi, nu)?;
                    let todd = partition::partition_via_todd_exact(phi, nu, &tau)?;
                    let ok = todd
                        == zonospline::cyclotomic::Cyc::from_rat(Rat::from_integer(
                            brute.clone(),
                        ));
                    out.push_str(&format!(
                        "{:?},{},{},{}\n",
                        nu,
                        brute,
                        todd.as_qcomplex()
                            .map(|q| q.format())
                            .unwrap_or_else(|| "non-rational".into()),
                        ok
                    ));
                }
                Some(y) => {
                    let brute = partition::partition_trace(phi, y, nu)?;
                    let todd = partition::partition_via_todd(phi, y, nu, &tau)?;
                    let ok = (brute - todd).norm() <= 1e-6;
                    out.push_str(&format!(
                        "{:?},{:.12},{:.12},{}\n",
                        nu,
                        brute.re,
                        todd.re,
                        ok
                    ));
                }
            }
        }
    }
    Ok(out)
}

/// One witness per chamber met by scanning a small window of half-integer
/// points.
fn chamber_witnesses(phi: &DirectionList) -> zonospline::Result<Vec<RationalVector>> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    let mut points: Vec<Vec<i64>> = Vec::new();
    lattice_window(phi.dim, 4, &mut vec![], &mut points);
    for p in points {
        let v = RationalVector::new(
            p.iter()
                .map(|&x| Rat::from_integer(x.into()) + rat(1, 3))
                .collect(),
        );
        if let Ok(tau) = partition::chamber_of(phi, &v) {
            // keep only chambers inside the cone: the multispline vanishes
            // on the others, they carry no partition data
            if partition::multispline_exact(phi, &v).map(|m| m.is_positive()).unwrap_or(false)
                && seen.insert(tau.key())
            {
                out.push(v);
            }
        }
    }
    Ok(out)
}

fn lattice_window(dim: usize, radius: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if prefix.len() == dim {
        out.push(prefix.clone());
        return;
    }
    for x in -radius..=radius {
        prefix.push(x);
        lattice_window(dim, radius, prefix, out);
        prefix.pop();
    }
}

fn run_suite(suite: &str, phi: &DirectionList, seed: u64) -> zonospline::Result<usize> {
    match suite {
        "delta-recovery" => suite_delta_recovery(phi, seed),
        "partition" => suite_partition(phi),
        "unity" => suite_unity(phi, seed),
        other => Err(zonospline::Error::Parse(format!("unknown suite {other:?}"))),
    }
}

struct Lcg(u64);

impl Lcg {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        self.0 >> 16
    }
    fn rat_small(&mut self) -> Rat {
        let num = (self.next() % 19) as i64 - 9;
        let den = 1 + (self.next() % 7) as i64;
        rat(num, den)
    }
}

fn suite_delta_recovery(phi: &DirectionList, seed: u64) -> zonospline::Result<usize> {
    let mut rng = Lcg(seed.wrapping_mul(0x9e3779b9) | 1);
    let mut failures = 0;
    let eps = arrangement::generic_direction(phi, seed, Some(&Representation::zero(phi)))?;
    for case in 0..5 {
        let mut f = LatticeFunction::new();
        let mut support: Vec<Vec<i64>> = Vec::new();
        lattice_window(phi.dim, 2, &mut vec![], &mut support);
        for point in support {
            if rng.next() % 3 == 0 {
                f.set(point, QComplex::new(rng.rat_small(), rng.rat_small()));
            }
        }
        let reach = deconv::support_reach(phi, &f);
        let mut window: Vec<Vec<i64>> = Vec::new();
        lattice_window(phi.dim, reach.min(6), &mut vec![], &mut window);
        let mut ok = true;
        for lambda in &window {
            let got = deconv::deconvolve_exact(phi, &f, lambda, &eps)?;
            let want = zonospline::cyclotomic::Cyc::from_qcomplex(&f.value(lambda));
            if got != want {
                ok = false;
            }
        }
        println!(
            "{}",
            json!({ "suite": "delta-recovery", "case": case, "pass": ok })
        );
        if !ok {
            failures += 1;
        }
    }
    Ok(failures)
}

fn suite_partition(phi: &DirectionList) -> zonospline::Result<usize> {
    let csv = verify_partition_csv(phi, 6, None)?;
    let mut failures = 0;
    for line in csv.lines().skip(1) {
        if line.ends_with("false") {
            failures += 1;
        }
    }
    println!(
        "{}",
        json!({ "suite": "partition", "pass": failures == 0, "rows": csv.lines().count() - 1 })
    );
    Ok(failures)
}

fn suite_unity(phi: &DirectionList, seed: u64) -> zonospline::Result<usize> {
    let mut rng = Lcg(seed | 1);
    let mut failures = 0;
    for case in 0..5 {
        let v = RationalVector::new(
            (0..phi.dim)
                .map(|_| rng.rat_small() + rat(1, 97))
                .collect(),
        );
        if !arrangement::is_regular(phi, &v)? {
            continue;
        }
        let bbox = boxspline::zonotope_bbox(phi);
        let mut total = Rat::from_integer(0.into());
        let mut points: Vec<Vec<i64>> = Vec::new();
        let radius = bbox
            .iter()
            .map(|(lo, hi)| {
                use num_traits::ToPrimitive;
                lo.to_i64().unwrap_or(0).abs().max(hi.to_i64().unwrap_or(0).abs())
            })
            .max()
            .unwrap_or(1)
            + 10;
        lattice_window(phi.dim, radius, &mut vec![], &mut points);
        for p in points {
            let w = v.sub_int(&p);
            if arrangement::is_regular(phi, &w)? {
                total += boxspline::eval_exact(phi, &w)?;
            }
        }
        let ok = total == Rat::from_integer(1.into());
        println!("{}", json!({ "suite": "unity", "case": case, "pass": ok }));
        if !ok {
            failures += 1;
        }
    }
    Ok(failures)
}

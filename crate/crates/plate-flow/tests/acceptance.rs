//! Acceptance criteria, one line each. Run with `cargo test --test acceptance`.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use plate_flow::drive::{self, boundary_check, GridChoice};
use plate_flow::format;
use plate_flow_core::analytic::residual::convergence_orders;
use plate_flow_core::analytic::FieldKind;
use plate_flow_core::oracle::Tolerances;
use plate_flow_core::params::{validate, FlowParams};
use plate_flow_core::specfun::{erfc, exp_erfc};
use plate_flow_core::sweep::{figure_preset, members, trend_violations_at, Member, Param, Trend};
use rand::{Rng, SeedableRng};

#[allow(clippy::excessive_precision)]
const ERFC: [(f64, f64); 50] = include!("../../core/tests/fixtures/erfc.rs");

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn all_members() -> Vec<Member> {
    (1..=13).flat_map(|id| members(&figure_preset(id).unwrap()).unwrap()).collect()
}

fn timed(limit: Duration, started: Instant, v: Verdict) -> Verdict {
    let took = started.elapsed();
    match v {
        Ok(d) if took <= limit => Ok(format!("{d}; {:.2} s", took.as_secs_f64())),
        Ok(d) => Err(format!("{d}; took {:.2} s > {:.0} s", took.as_secs_f64(), limit.as_secs_f64())),
        Err(d) => Err(d),
    }
}

fn boundary_exactness() -> Verdict {
    let start = Instant::now();
    let m = all_members();
    let v = boundary_check(&m).map(|d| format!("{} parameter sets, {d}", m.len()));
    timed(Duration::from_secs(1), start, v)
}

fn oracle_agreement() -> Verdict {
    let start = Instant::now();
    let targets = drive::figure_targets(&(1..=13).collect::<Vec<_>>()).unwrap();
    let tol = Tolerances::default();
    let mut worst = [0.0f64; 3];
    let mut failures = Vec::new();
    for t in &targets {
        let r = drive::run_sweep_verified(&t.spec, &GridChoice::default(), None).map_err(|e| format!("{}: {e}", t.name))?;
        for (v, rep) in t.spec.values.iter().zip(&r.comparisons) {
            for d in &rep.fields {
                let k = FieldKind::ALL.iter().position(|&k| k == d.kind).unwrap();
                worst[k] = worst[k].max(d.linf);
                if d.linf > tol.get(d.kind) {
                    failures.push(format!("{} {}: {} {:.3e}", t.name, t.spec.column_label(*v), d.kind, d.linf));
                }
            }
        }
    }
    let detail = format!("max Linf U {:.2e}, theta {:.2e}, C {:.2e} on Y <= 8", worst[0], worst[1], worst[2]);
    let v = if failures.is_empty() { Ok(detail) } else { Err(format!("{detail}; {}", failures.join("; "))) };
    timed(Duration::from_secs(180), start, v)
}

fn residual_convergence() -> Verdict {
    let m = members(&figure_preset(1).unwrap()).unwrap()[0];
    assert_eq!(m.t, 0.4);
    let orders = convergence_orders(&m.params, m.t, &drive::RESIDUAL_STEPS, &drive::residual_points()).map_err(|e| e.to_string())?;
    let flat: Vec<f64> = orders.iter().flatten().copied().collect();
    let detail = format!("orders {}", flat.iter().map(|o| format!("{o:.3}")).collect::<Vec<_>>().join(" "));
    if flat.iter().all(|o| (o - 2.0).abs() <= 0.2) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn monotonicity() -> Verdict {
    let start = Instant::now();
    use FieldKind::{Concentration as C, Temperature as Th, Velocity as U};
    use Trend::{Decreasing as Dn, Increasing as Up};
    let claims: [(u32, Param, &[f64], FieldKind, Trend); 13] = [
        (1, Param::R, &[2.0, 5.0, 10.0], U, Dn),
        (2, Param::K, &[0.2, 5.0, 10.0], U, Dn),
        (3, Param::A, &[5.0, 7.0, 9.0], U, Up),
        (4, Param::T, &[0.2, 0.4, 0.6], U, Up),
        (5, Param::Gr, &[5.0, 10.0, 15.0], U, Up),
        (6, Param::Gc, &[5.0, 10.0, 15.0], U, Up),
        (7, Param::Sc, &[0.16, 0.3, 0.6], U, Dn),
        (8, Param::Pr, &[0.17, 0.5, 0.71], U, Dn),
        (9, Param::Pr, &[5.0, 7.0, 11.62], Th, Dn),
        (10, Param::T, &[0.2, 0.4, 0.6, 0.8], Th, Up),
        (11, Param::A, &[3.0, 5.0, 7.0], Th, Up),
        (12, Param::Sc, &[0.16, 0.3, 0.6], C, Dn),
        (13, Param::T, &[0.2, 0.4, 0.6], C, Up),
    ];
    let mut bad = Vec::new();
    for (id, varied, values, kind, trend) in claims {
        let mut spec = figure_preset(id).unwrap();
        if (spec.varied, spec.values.as_slice(), spec.kind) != (varied, values, kind) {
            bad.push(format!("figure {id}: registry entry differs"));
        }
        spec.trend = Some(trend);
        for v in trend_violations_at(&spec, &[0.5, 1.0]).map_err(|e| e.to_string())? {
            bad.push(format!("figure {id}: {v}"));
        }
    }
    let v = if bad.is_empty() { Ok("13 claims at Y = 0.5, 1.0".to_string()) } else { Err(bad.join("; ")) };
    timed(Duration::from_secs(1), start, v)
}

fn identities() -> Verdict {
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
    let (mut accepted, mut worst_b, mut worst_a) = (0, 0.0f64, 0.0f64);
    while accepted < 2000 {
        let p = FlowParams {
            gr: rng.gen_range(-20.0..20.0),
            gc: rng.gen_range(-20.0..20.0),
            pr: rng.gen_range(0.05..15.0),
            sc: rng.gen_range(0.05..3.0),
            radiation: rng.gen_range(0.0..10.0),
            reaction: rng.gen_range(0.01..10.0),
            temp_rate: rng.gen_range(-2.0..5.0),
        };
        let Ok(v) = validate(&p) else { continue };
        accepted += 1;
        let d = v.derived();
        worst_b = worst_b.max((d.amp_wall_pole + d.amp_thermal_pole).abs());
        worst_a = worst_a.max((d.amp_mass * d.mass_pole * (1.0 - p.sc) - p.gc).abs());
    }
    let detail = format!("{accepted} sets, |B + C| <= {worst_b:.1e}, |A d (1 - Sc) - Gc| <= {worst_a:.1e}");
    if worst_b <= 1e-12 && worst_a <= 1e-12 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn erfc_kernel() -> Verdict {
    let worst = ERFC
        .iter()
        .map(|&(x, want)| ((erfc(x).unwrap() - want) / want).abs())
        .fold(0.0f64, f64::max);
    let naive = 900f64.exp() * erfc(30.0).unwrap();
    let got = exp_erfc(900.0, 30.0).map_err(|e| e.to_string())?;
    let want = 0.018_795_888_861_416_75;
    let rel = ((got - want) / want).abs();
    let detail = format!("50 fixtures max rel {worst:.1e}; exp_erfc(900, 30) = {got} (rel {rel:.1e}, naive {naive})");
    if worst <= 1e-13 && got.is_finite() && rel <= 1e-11 && naive.is_nan() {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn all_figure_csv() -> Vec<String> {
    (1..=13)
        .map(|id| format::sweep_csv(&drive::run_sweep(&figure_preset(id).unwrap()).unwrap()).unwrap())
        .collect()
}

fn determinism() -> Verdict {
    let pool = |n| rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
    let one = pool(1).install(all_figure_csv);
    let again = pool(1).install(all_figure_csv);
    let four = pool(4).install(all_figure_csv);
    if one != again || one != four {
        return Err("in-process CSV differs between runs or thread counts".into());
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for (run, threads) in [(0, "1"), (1, "1"), (2, "4")] {
        let out = dir.path().join(run.to_string());
        for id in 1..=13 {
            let status = Command::new(env!("CARGO_BIN_EXE_plate-flow"))
                .args(["figure", &id.to_string(), "--out"])
                .arg(&out)
                .env("RAYON_NUM_THREADS", threads)
                .output()
                .map_err(|e| e.to_string())?
                .status;
            if !status.success() {
                return Err(format!("figure {id} exited with {status}"));
            }
        }
        let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(&out)
            .unwrap()
            .map(|e| e.unwrap())
            .map(|e| (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap()))
            .collect();
        files.sort();
        outputs.push(files);
    }
    if outputs[0] != outputs[1] || outputs[0] != outputs[2] {
        return Err("CLI output differs between runs or thread counts".into());
    }
    Ok(format!("13 figures, {} files identical over 3 CLI runs (1, 1, 4 threads) and 3 in-process runs", outputs[0].len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("boundary exactness", boundary_exactness),
        ("oracle agreement", oracle_agreement),
        ("residual convergence", residual_convergence),
        ("monotonicity battery", monotonicity),
        ("algebraic identities", identities),
        ("erfc kernel", erfc_kernel),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (status, detail) = match check() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {} {status} {name}: {detail}", i + 1);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

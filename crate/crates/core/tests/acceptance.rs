//! Acceptance criteria, one `[PASS]`/`[FAIL]` line each. Exits non-zero if
//! any criterion fails.

mod support;

use std::time::Instant;

use finsler::analysis::{self, numata_pipeline, IdentityId, Status, Tolerances, VerificationReport};
use finsler::connections::{horizontal_derivative, vertical_derivative, Connection, ConnectionJets};
use finsler::curvatures::{bianchi_residual, landsberg_tensor, PointGeometry, MIN_GEOMETRY_ORDER};
use finsler::fundamentals::fundamental_pack;
use finsler::metrics::{builtin_fixture, sample_points, ChartPoint, MetricFixture, SampleSpec};
use finsler::tensor::JetTensor;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::exprs::{check_problem, random_problem};
use support::synthetic;

const CATALOG: [&str; 5] = ["euclidean", "riemann-const-k", "quartic-minkowski", "funk", "randers-generic"];

type Outcome = Result<String, String>;

fn fixture(name: &str, dim: usize, params: &[(&str, f64)]) -> MetricFixture {
    let map = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    builtin_fixture(name, dim, &map).unwrap()
}

fn points(f: &MetricFixture, count: usize, seed: u64) -> Vec<ChartPoint> {
    sample_points(f, &SampleSpec::new(count, seed)).unwrap()
}

/// Accumulates the worst value of each named quantity.
#[derive(Default)]
struct Worst(Vec<(String, f64, f64)>);

impl Worst {
    fn record(&mut self, name: &str, value: f64, bound: f64) {
        match self.0.iter_mut().find(|(n, _, _)| n == name) {
            Some(e) => e.1 = if value.is_nan() { value } else { e.1.max(value) },
            None => self.0.push((name.to_string(), value, bound)),
        }
    }

    fn finish(self) -> Outcome {
        let text = self
            .0
            .iter()
            .map(|(n, v, b)| format!("{n} {v:.1e} (< {b:.0e})"))
            .collect::<Vec<_>>()
            .join(", ");
        if self.0.iter().all(|(_, v, b)| v < b) {
            Ok(text)
        } else {
            Err(text)
        }
    }
}

fn ac1() -> Outcome {
    let mut w = Worst::default();
    for seed in 0..20 {
        w.record("max relative coefficient error", check_problem(&random_problem(1000 + seed, 3, 6)), 1e-12);
    }
    w.finish()
}

fn ac2() -> Outcome {
    let mut w = Worst::default();
    for name in CATALOG {
        let f = fixture(name, 3, &[]);
        for p in points(&f, 50, 2) {
            let pk = fundamental_pack(&f, &p).map_err(|e| e.to_string())?;
            let n = 3;
            w.record("T asymmetry", pk.t.asymmetry(&[0, 1, 2]) / pk.t.max_abs().max(1.0), 1e-9);
            w.record("|ħ(·,η)|", pk.hbar.contract(1, &p.y).max_abs(), 1e-8);
            let gyy: f64 = (0..n * n).map(|k| pk.g.get(&[k / n, k % n]) * p.y[k / n] * p.y[k % n]).sum();
            w.record("|g(η,η) − L²|", (gyy - pk.l * pk.l).abs() / (pk.l * pk.l).max(1.0), 1e-8);
            let mut proj: f64 = 0.0;
            for i in 0..n {
                for j in 0..n {
                    let sq: f64 = (0..n).map(|m| pk.phi.get(&[i, m]) * pk.phi.get(&[m, j])).sum();
                    proj = proj.max((sq - pk.phi.get(&[i, j])).abs());
                }
            }
            let trace: f64 = (0..n).map(|i| pk.phi.get(&[i, i])).sum();
            w.record("|φ² − φ|", proj, 1e-8);
            w.record("|tr φ − (n−1)|", (trace - 2.0).abs(), 1e-8);
        }
    }
    w.finish()
}

fn ac3() -> Outcome {
    let mut w = Worst::default();
    for name in CATALOG {
        let f = fixture(name, 3, &[]);
        for p in points(&f, 20, 3) {
            let pg = PointGeometry::new(&f, &p, MIN_GEOMETRY_ORDER).map_err(|e| e.to_string())?;
            let conn: &ConnectionJets = &pg.conn;
            let (g, nl, gb) = (conn.spray.value(), conn.nonlinear.value(), conn.berwald.value());
            let scale = nl.max_abs().max(1.0);
            let ny = nl.contract(1, &p.y);
            let two_g = finsler::tensor::Tensor::from_fn(3, g.valence(), |ix| 2.0 * g.get(ix));
            w.record("|N y − 2G|", ny.max_abs_diff(&two_g) / scale, 1e-8);
            w.record("|G_jk y^k − N|", gb.contract(2, &p.y).max_abs_diff(&nl) / scale, 1e-8);
            let fund = &pg.fund;
            let metricity = horizontal_derivative(&fund.g, Connection::Cartan, conn)
                .value()
                .max_abs()
                .max(vertical_derivative(&fund.g, Connection::Cartan, &fund.cartan_mixed).value().max_abs());
            w.record("|∇g| (Cartan)", metricity / fund.g.value().max_abs().max(1.0), 1e-8);
            let eta = JetTensor::from_comps(3, &[finsler::tensor::Slot::Up], pg.y().to_vec());
            let defl = horizontal_derivative(&eta, Connection::Berwald, conn).value().max_abs();
            w.record("|D°_βη|", defl / fund.l.value().max(1.0), 1e-8);
        }
    }
    w.finish()
}

fn verify(name: &str, dim: usize, params: &[(&str, f64)], samples: usize) -> Result<VerificationReport, String> {
    analysis::verify(&fixture(name, dim, params), &SampleSpec::new(samples, 1), Tolerances::default(), None)
        .map_err(|e| e.to_string())
}

fn require(w: &mut Worst, v: &VerificationReport, ids: &[IdentityId], bound: f64) -> Result<(), String> {
    for id in ids {
        let o = v.outcome(*id).unwrap();
        match (o.status, o.max_residual) {
            (Status::Pass | Status::Fail, Some(r)) => w.record(id.name(), r, bound),
            _ => return Err(format!("{} on {}: {:?}", id.name(), v.classification.fixture, o.status)),
        }
    }
    Ok(())
}

fn ac4() -> Outcome {
    use IdentityId::*;
    let ids = [
        CartanTensorSymmetry,
        CartanVerticalDerivativeSymmetry,
        SupportingElementGradient,
        AngularEndomorphismVertical,
        BerwaldVerticalAngularMetric,
        CartanVerticalAngularMetric,
    ];
    let mut w = Worst::default();
    for name in ["funk", "quartic-minkowski"] {
        let v = verify(name, 3, &[], 30)?;
        require(&mut w, &v, &ids, 1e-6)?;
    }
    w.finish()
}

fn random_triples(count: usize, seed: u64) -> Vec<[Vec<f64>; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = || (0..3).map(|_| rng.random_range(-1.0..1.0)).collect::<Vec<f64>>();
    (0..count).map(|_| [v(), v(), v()]).collect()
}

fn ac5() -> Outcome {
    let mut w = Worst::default();
    let dirs = random_triples(20, 5);
    for name in CATALOG {
        let f = fixture(name, 3, &[]);
        for p in points(&f, 10, 5) {
            w.record("second Bianchi", bianchi_residual(&f, &p, &dirs).map_err(|e| e.to_string())?, 1e-6);
            w.record("Landsberg two-route", landsberg_tensor(&f, &p).map_err(|e| e.to_string())?.route_residual, 1e-7);
            let pg = PointGeometry::new(&f, &p, MIN_GEOMETRY_ORDER).map_err(|e| e.to_string())?;
            let pb = pg.curv.p_berwald.value();
            w.record("|i_η P°|", pb.contract(1, &p.y).max_abs() / pb.max_abs().max(1.0), 1e-8);
        }
    }
    w.finish()
}

fn ac6() -> Outcome {
    let mut w = Worst::default();
    for (name, params, want) in [
        ("riemann-const-k", vec![("k", 1.0)], 1.0),
        ("riemann-const-k", vec![("k", -0.5)], -0.5),
        ("funk", vec![], -0.25),
    ] {
        let c = analysis::classify(&fixture(name, 3, &params), &SampleSpec::new(30, 1), Tolerances::default(), None)
            .map_err(|e| e.to_string())?;
        let label = format!("|r − ({want})| {name}");
        let err = (c.scalar.r_min - want).abs().max((c.scalar.r_max - want).abs());
        w.record(&label, err, 1e-6);
        if !c.constant_r.holds {
            return Err(format!("{name}: constant_r verdict false"));
        }
    }
    w.finish()
}

fn ac7() -> Outcome {
    use IdentityId::*;
    let scalar = [
        AuxAEtaFirst,
        AuxAEtaSecond,
        AuxEtaEta,
        AuxBVerticalDerivative,
        HCurvatureScalarForm,
        VhTorsionScalarForm,
        HvDerivativeScalarForm,
        HvDerivativeScalarFormEta,
    ];
    let c_red = [CReducibleProportionality];
    let landsberg = [LandsbergHorizontalSymmetry, LandsbergHorizontalCSymmetry];
    let always = [VerticalCSymmetry];
    let vacuous = [
        LandsbergCartanForm,
        LandsbergRGradient,
        CHorizontalProportionality,
        DimensionContraction,
        BerwaldCQuadratic,
    ];
    let mut w = Worst::default();
    let mut nonvacuous = Vec::new();
    for name in CATALOG {
        let v = verify(name, 3, &[], 30)?;
        let c = &v.classification;
        require(&mut w, &v, &always, 1e-5)?;
        if c.scalar_curvature.holds && c.scalar.nonzero_r {
            require(&mut w, &v, &scalar, 1e-5)?;
        }
        if c.c_reducible.holds && !c.c_reducible.trivial {
            require(&mut w, &v, &c_red, 1e-5)?;
        }
        if c.landsberg.holds {
            require(&mut w, &v, &landsberg, 1e-5)?;
        }
        for id in vacuous {
            let o = v.outcome(id).unwrap();
            let documented = match o.status {
                Status::Refused | Status::Vacuous => true,
                Status::Pass => o.trivial,
                Status::Fail => false,
            };
            if !documented {
                nonvacuous.push(format!("{} on {name}", id.name()));
            }
        }
    }
    if !nonvacuous.is_empty() {
        return Err(format!("gates expected vacuous but carried content: {}", nonvacuous.join(", ")));
    }
    let (gradient, c_red) = synthetic::landsberg_scalar_residuals();
    let chain = synthetic::c_reducible_chain();
    let mu = synthetic::mu_pair();
    let synthetic_worst = chain.iter().map(|v| v.abs()).fold(gradient.max(c_red).max(mu.1), f64::max);
    if mu.0 != 2.0 {
        return Err(format!("synthetic μ recovered as {}", mu.0));
    }
    w.record("synthetic gate inputs", synthetic_worst, 1e-15);
    w.finish()
}

fn ac8() -> Outcome {
    // riemannian, berwald, landsberg, c_reducible, scalar with r = 0, r.
    type Row = ([Option<bool>; 4], Option<bool>, Option<f64>);
    let table: [(&str, Row); 5] = [
        ("euclidean", ([Some(true), Some(true), Some(true), None], None, None)),
        ("riemann-const-k", ([Some(true), Some(true), Some(true), None], None, Some(1.0))),
        ("quartic-minkowski", ([Some(false), Some(true), Some(true), Some(false)], Some(true), Some(0.0))),
        ("funk", ([Some(false), Some(false), Some(false), Some(true)], None, Some(-0.25))),
        ("randers-generic", ([None, None, None, Some(true)], None, None)),
    ];
    let tol = Tolerances::new(1e-6, 1e-6).unwrap();
    let mut mismatches = Vec::new();
    for (name, (preds, flat, r)) in table {
        let c = analysis::classify(&fixture(name, 3, &[]), &SampleSpec::new(30, 1), tol, None).map_err(|e| e.to_string())?;
        let got = [c.riemannian.holds, c.berwald.holds, c.landsberg.holds, c.c_reducible.holds];
        for (i, (want, got)) in preds.iter().zip(got).enumerate() {
            if let Some(want) = want {
                if *want != got {
                    mismatches.push(format!("{name}: {} = {got}", c.verdicts()[i].0));
                }
            }
        }
        if flat == Some(true) && c.scalar.flat_points != c.samples {
            mismatches.push(format!("{name}: r ≠ 0 at some samples"));
        }
        if let Some(r) = r {
            if (c.scalar.r_mean - r).abs() > 1e-6 || !c.constant_r.holds {
                mismatches.push(format!("{name}: r = {}", c.scalar.r_mean));
            }
        }
        if name == "riemann-const-k" && !c.constant_r.holds {
            mismatches.push(format!("{name}: constant_r false"));
        }
    }
    if mismatches.is_empty() {
        Ok("5 fixtures × 5 predicates match".into())
    } else {
        Err(mismatches.join("; "))
    }
}

fn ac9() -> Outcome {
    let spec = SampleSpec::new(30, 1);
    let run = |name: &str, params: &[(&str, f64)]| {
        numata_pipeline(&fixture(name, 3, params), &spec, Tolerances::default(), None).map_err(|e| e.to_string())
    };
    let sphere = run("riemann-const-k", &[("k", 1.0)])?;
    let concl = sphere.conclusion.as_ref().ok_or("riemann-const-k: conclusion not asserted")?;
    let chain = sphere.chain_max_residual.unwrap_or(f64::NAN);
    if !(sphere.hypothesis.holds && concl.holds && sphere.chain.iter().all(|o| o.status == Status::Pass) && chain < 1e-5) {
        return Err(format!("riemann-const-k: {}", sphere.summary));
    }
    let funk = run("funk", &[])?;
    let quartic = run("quartic-minkowski", &[])?;
    let legs_ok = !funk.hypothesis.landsberg
        && funk.hypothesis.scalar_curvature
        && funk.hypothesis.nonzero_r
        && quartic.hypothesis.landsberg
        && quartic.hypothesis.scalar_curvature
        && !quartic.hypothesis.nonzero_r
        && funk.conclusion.is_none()
        && quartic.conclusion.is_none();
    let text = format!(
        "chain max residual {chain:.1e} (< 1e-5); funk: {}; quartic: {}",
        funk.hypothesis.failed_legs.join("; "),
        quartic.hypothesis.failed_legs.join("; ")
    );
    if legs_ok {
        Ok(text)
    } else {
        Err(text)
    }
}

fn cli_json(args: &[&str]) -> Result<Vec<u8>, String> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["finsler"];
    full.extend_from_slice(args);
    match finsler::cli::run(full, &mut out, &mut err) {
        0 => Ok(out),
        code => Err(format!("{args:?} exited {code}: {}", String::from_utf8_lossy(&err))),
    }
}

fn ac10() -> Outcome {
    let mut checked = 0;
    for name in CATALOG {
        let base = ["verify", "--fixture", name, "--dim", "3", "--samples", "12", "--seed", "11", "--output", "json"];
        let with = |threads: &str| {
            let mut a = base.to_vec();
            a.extend(["--threads", threads]);
            cli_json(&a)
        };
        let first = with("1")?;
        if first != with("1")? {
            return Err(format!("{name}: repeated runs differ"));
        }
        if first != with("4")? {
            return Err(format!("{name}: output differs between 1 and 4 threads"));
        }
        checked += first.len();
    }
    Ok(format!("5 fixtures, {checked} bytes byte-identical across runs and threads ∈ {{1, 4}}"))
}

fn main() {
    let criteria: [(&str, &str, fn() -> Outcome); 10] = [
        ("AC1", "jet coefficients vs exact series", ac1),
        ("AC2", "fundamental invariants", ac2),
        ("AC3", "connection ladder", ac3),
        ("AC4", "fundamental vertical identities", ac4),
        ("AC5", "curvature integration", ac5),
        ("AC6", "scalar-curvature fits", ac6),
        ("AC7", "identity suite", ac7),
        ("AC8", "truth table", ac8),
        ("AC9", "rigidity pipeline", ac9),
        ("AC10", "determinism", ac10),
    ];
    let mut failed = 0;
    for (id, title, check) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {id} {title}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {id} {title}: {detail} [{secs:.1}s]");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

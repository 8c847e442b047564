//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use coset_nvalued::axioms::{check_assoc, check_well_defined, verify_space, Axiom, AxiomReport, VerifyConfig};
use coset_nvalued::coset::{Base, CosetSpace};
use coset_nvalued::quaternion::{rotation_of, Quaternion, Vec3};
use coset_nvalued::rotgroups::{binary_cover, build_group, has_half_turn, GroupSpec};
use coset_nvalued::topology::{
    antipodal_residual, check_suspension, classify, riemann_hurwitz_check, singular_orbits, solve_antipodal,
    tau_has_fixed_points, Space, SUSPENSION_SAMPLES,
};

const CLOSURE_TOL: f64 = 1e-9;
const HURWITZ_TOL: f64 = 1e-9;
const AXIOM_TOL: f64 = 1e-6;
const PRACTICAL_DEVIATION: f64 = 1e-8;
const CIRCLE_TOL: f64 = 1e-9;
const GRID_TOL: f64 = 1e-3;
const RE_TOL: f64 = 1e-12;
const CATALOG_BUDGET: Duration = Duration::from_secs(5);
const AXIOM_BUDGET: Duration = Duration::from_secs(60);

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn new(problems: Vec<String>, summary: String) -> Self {
        if problems.is_empty() {
            Outcome {
                ok: true,
                detail: summary,
            }
        } else {
            Outcome {
                ok: false,
                detail: format!("{summary}; {}", problems.join("; ")),
            }
        }
    }
}

fn catalog() -> Vec<GroupSpec> {
    let mut specs: Vec<GroupSpec> = (1..=8).map(GroupSpec::Cyclic).collect();
    specs.extend((1..=6).map(GroupSpec::Dihedral));
    specs.extend([GroupSpec::Tetrahedral, GroupSpec::Octahedral, GroupSpec::Icosahedral]);
    specs
}

fn classical_order(spec: GroupSpec) -> usize {
    match spec {
        GroupSpec::Cyclic(n) => n as usize,
        GroupSpec::Dihedral(m) => 2 * m as usize,
        GroupSpec::Tetrahedral => 12,
        GroupSpec::Octahedral => 24,
        GroupSpec::Icosahedral => 60,
    }
}

/// Stabilizer orders of the branch orbits of `S² → S²/G`.
fn classical_signature(spec: GroupSpec) -> Vec<usize> {
    let mut s = match spec {
        GroupSpec::Cyclic(1) => vec![],
        GroupSpec::Cyclic(n) => vec![n as usize, n as usize],
        GroupSpec::Dihedral(m) => vec![2, 2, m as usize],
        GroupSpec::Tetrahedral => vec![2, 3, 3],
        GroupSpec::Octahedral => vec![2, 3, 4],
        GroupSpec::Icosahedral => vec![2, 3, 5],
    };
    // A stabilizer of order 1 is not a branch point (D1 gives (2,2,1) → (2,2)).
    s.retain(|&nu| nu > 1);
    s.sort_unstable();
    s
}

fn hurwitz_units() -> Vec<[f64; 4]> {
    let mut units = Vec::with_capacity(24);
    for k in 0..4 {
        for sign in [1.0, -1.0] {
            let mut u = [0.0; 4];
            u[k] = sign;
            units.push(u);
        }
    }
    for bits in 0..16u32 {
        let s = |b: u32| if bits & (1 << b) == 0 { 0.5 } else { -0.5 };
        units.push([s(0), s(1), s(2), s(3)]);
    }
    units
}

fn catalog_integrity() -> Outcome {
    let start = Instant::now();
    let mut problems = Vec::new();
    let mut worst = 0.0f64;
    for spec in catalog() {
        let group = match build_group(spec) {
            Ok(g) => g,
            Err(e) => {
                problems.push(format!("{spec}: {e}"));
                continue;
            }
        };
        let n = classical_order(spec);
        if group.order() != n {
            problems.push(format!("{spec}: order {} != {n}", group.order()));
        }
        if group.cover().len() != 2 * n {
            problems.push(format!("{spec}: cover {} != {}", group.cover().len(), 2 * n));
        }
        let defect = group.closure_defect();
        worst = worst.max(defect);
        if defect > CLOSURE_TOL {
            problems.push(format!("{spec}: closure defect {defect:e}"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= CATALOG_BUDGET {
        problems.push(format!("took {elapsed:?}"));
    }
    Outcome::new(
        problems,
        format!(
            "{} groups, closure defect <= {worst:.1e}, {elapsed:.2?}",
            catalog().len()
        ),
    )
}

fn hurwitz_oracle() -> Outcome {
    let group = build_group(GroupSpec::Tetrahedral).expect("T builds");
    let cover: Vec<Quaternion> = binary_cover(&group).iter().map(|q| q.quaternion()).collect();
    let oracle: Vec<Quaternion> = hurwitz_units().into_iter().map(Quaternion::from_array).collect();
    let mut problems = Vec::new();
    if cover.len() != 24 {
        problems.push(format!("cover has {} elements", cover.len()));
    }
    for u in &oracle {
        let hits = cover.iter().filter(|q| q.distance(*u) <= HURWITZ_TOL).count();
        if hits != 1 {
            problems.push(format!("unit {u} matched {hits} times"));
        }
    }
    for q in &cover {
        if !oracle.iter().any(|u| q.distance(*u) <= HURWITZ_TOL) {
            problems.push(format!("{q} is not a Hurwitz unit"));
        }
    }
    Outcome::new(problems, "binary tetrahedral cover equals the 24 Hurwitz units".into())
}

fn axiom_suite() -> Outcome {
    let start = Instant::now();
    let mut problems = Vec::new();
    let mut worst = 0.0f64;
    let mut spaces = 0;
    for spec in catalog() {
        let group = build_group(spec).expect("catalog group builds");
        let triples = if spec == GroupSpec::Icosahedral { 20 } else { 50 };
        let cfg = VerifyConfig {
            identity_samples: 200,
            inverse_samples: 200,
            triples,
            well_defined_samples: 100,
            seed: 0,
            tolerance: AXIOM_TOL,
        };
        for base in [Base::Sp1, Base::So3] {
            let space = CosetSpace::new(base, group.clone());
            let report = verify_space(&space, &cfg);
            spaces += 1;
            for c in &report.checks {
                let expected = match c.axiom {
                    Axiom::Identity => 200,
                    Axiom::Inverse => 200,
                    Axiom::Associativity => triples,
                    Axiom::WellDefined => 100,
                };
                if c.trials != expected {
                    problems.push(format!("{}: {} ran {} trials", report.space, c.axiom, c.trials));
                }
                if c.failures != 0 {
                    problems.push(format!("{}: {} failures in {}", report.space, c.failures, c.axiom));
                }
                worst = worst.max(c.max_deviation);
            }
            if report.checks.len() != 4 {
                problems.push(format!("{}: {} suites ran", report.space, report.checks.len()));
            }
        }
    }
    if worst >= PRACTICAL_DEVIATION {
        problems.push(format!("max deviation {worst:e}"));
    }
    let elapsed = start.elapsed();
    if elapsed >= AXIOM_BUDGET {
        problems.push(format!("took {elapsed:?}"));
    }
    Outcome::new(
        problems,
        format!("{spaces} spaces, max deviation {worst:.1e}, {elapsed:.2?}"),
    )
}

fn negative_controls() -> Outcome {
    let axis = Vec3::new(1.0, 2.0, 3.0);
    let specs = [
        GroupSpec::Cyclic(2),
        GroupSpec::Cyclic(3),
        GroupSpec::Cyclic(6),
        GroupSpec::Dihedral(2),
        GroupSpec::Dihedral(5),
        GroupSpec::Tetrahedral,
        GroupSpec::Octahedral,
        GroupSpec::Icosahedral,
    ];
    let mut problems = Vec::new();
    let mut tested = 0;
    for spec in specs {
        let group = build_group(spec).expect("catalog group builds");
        let index = (group.identity_index() + 1) % group.order();
        let corrupted = group.perturbed(index, axis, 0.1);
        for base in [Base::Sp1, Base::So3] {
            let space = CosetSpace::new(base, corrupted.clone());
            let assoc: AxiomReport = check_assoc(&space, 20, 0, AXIOM_TOL);
            let wd = check_well_defined(&space, 50, 0, AXIOM_TOL);
            tested += 1;
            if assoc.passed() {
                problems.push(format!("{base}/{spec}: associativity not detected"));
            }
            if wd.passed() {
                problems.push(format!("{base}/{spec}: well-definedness not detected"));
            }
        }
    }
    Outcome::new(problems, format!("{tested} corrupted spaces detected by both suites"))
}

fn tau_parity() -> Outcome {
    let s3_set: Vec<GroupSpec> = catalog()
        .into_iter()
        .filter(|s| !matches!(s, GroupSpec::Cyclic(n) if n % 2 == 1))
        .collect();
    let mut problems = Vec::new();
    for spec in catalog() {
        let group = build_group(spec).expect("catalog group builds");
        let even = group.order().is_multiple_of(2);
        let tau = tau_has_fixed_points(&group);
        let half = has_half_turn(&group);
        if tau != even || half != even {
            problems.push(format!("{spec}: tau {tau}, half-turn {half}, n even {even}"));
        }
        let expected = if s3_set.contains(&spec) { Space::S3 } else { Space::RP3 };
        match classify(Base::So3, spec) {
            Ok(r) if r.predicted_space == expected => {}
            Ok(r) => problems.push(format!("{spec}: classified {}", r.predicted_space)),
            Err(e) => problems.push(format!("{spec}: {e}")),
        }
    }
    Outcome::new(problems, "S3 for C2,C4,C6,C8,D1..D6,T,O,I; RP3 for C1,C3,C5,C7".into())
}

/// Roughly uniform points on the unit sphere.
fn fibonacci_sphere(count: usize) -> Vec<Vec3> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|k| {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / count as f64;
            let r = (1.0 - z * z).sqrt();
            let t = golden * k as f64;
            Vec3::new(r * t.cos(), r * t.sin(), z)
        })
        .collect()
}

fn antipodal_equation() -> Outcome {
    let grid = fibonacci_sphere(10_000);
    let mut problems = Vec::new();
    let (mut half_turn_lifts, mut other_lifts) = (0, 0);
    let mut worst_circle = 0.0f64;
    let mut best_grid = f64::INFINITY;
    for spec in catalog() {
        let group = build_group(spec).expect("catalog group builds");
        for &q in group.cover() {
            let angle_is_pi = (q.quaternion().w).abs() <= 1e-12;
            let sol = solve_antipodal(q);
            if sol.solvable != angle_is_pi {
                problems.push(format!(
                    "{spec}: solver disagrees for {} (angle {})",
                    q.quaternion(),
                    rotation_of(q).angle
                ));
            }
            if angle_is_pi {
                half_turn_lifts += 1;
                let circle = sol.sample_circle(32);
                if circle.len() != 32 {
                    problems.push(format!("{spec}: {} circle points", circle.len()));
                }
                for x in circle {
                    worst_circle = worst_circle.max(antipodal_residual(q, x));
                }
            } else {
                other_lifts += 1;
                let best = grid
                    .iter()
                    .map(|&x| antipodal_residual(q, x))
                    .fold(f64::INFINITY, f64::min);
                best_grid = best_grid.min(best);
                if best < GRID_TOL {
                    problems.push(format!("{spec}: {} has grid residual {best:e}", q.quaternion()));
                }
            }
        }
    }
    if worst_circle >= CIRCLE_TOL {
        problems.push(format!("circle residual {worst_circle:e}"));
    }
    Outcome::new(
        problems,
        format!(
            "{half_turn_lifts} half-turn lifts (circle residual <= {worst_circle:.1e}), \
             {other_lifts} other lifts (grid residual >= {best_grid:.3})"
        ),
    )
}

fn suspension_evidence() -> Outcome {
    let mut problems = Vec::new();
    let mut worst = 0.0f64;
    let mut identities = 0;
    for spec in catalog() {
        let group = build_group(spec).expect("catalog group builds");
        let s = check_suspension(&group, SUSPENSION_SAMPLES, 0);
        worst = worst.max(s.max_deviation).max(s.pole_deviation);
        if s.max_deviation >= RE_TOL || s.pole_deviation >= RE_TOL {
            problems.push(format!("{spec}: Re deviation {:e}", s.max_deviation));
        }
        if group.order() < 2 {
            continue;
        }
        let signature = singular_orbits(&group).signature();
        if signature != classical_signature(spec) {
            problems.push(format!("{spec}: signature {signature:?}"));
        }
        match riemann_hurwitz_check(&group) {
            Ok(_) => identities += 1,
            Err(e) => problems.push(format!("{spec}: {e}")),
        }
    }
    Outcome::new(
        problems,
        format!("Re deviation <= {worst:.1e}, {identities} exact Riemann-Hurwitz identities, signatures match"),
    )
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_coset-nvalued"))
            .args(["verify", "--all", "--json", "--seed", "0"])
            .output()
    };
    let (first, second) = match (run(), run()) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return Outcome::new(vec![e.to_string()], "could not run binary".into()),
    };
    let mut problems = Vec::new();
    if !first.status.success() || !second.status.success() {
        problems.push(format!("exit status {} / {}", first.status, second.status));
    }
    if first.stdout != second.stdout {
        problems.push("outputs differ".into());
    }
    if first.stdout.is_empty() {
        problems.push("empty output".into());
    }
    Outcome::new(problems, format!("two runs, {} identical bytes", first.stdout.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("catalog integrity", catalog_integrity),
        ("hurwitz oracle", hurwitz_oracle),
        ("axiom suite", axiom_suite),
        ("negative controls", negative_controls),
        ("tau parity", tau_parity),
        ("antipodal equation", antipodal_equation),
        ("suspension and riemann-hurwitz", suspension_evidence),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = check();
        let verdict = if outcome.ok { "PASS" } else { "FAIL" };
        println!("{verdict} {name}: {}", outcome.detail);
        failed += usize::from(!outcome.ok);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

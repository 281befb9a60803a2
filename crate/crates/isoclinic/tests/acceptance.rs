//! One PASS/FAIL line per acceptance criterion. Exits nonzero on any FAIL.

use isoclinic::par::Exec;
use isoclinic::verify::{self, CheckReport};
use std::time::{Duration, Instant};

const SEED: u64 = 20_240_601;

struct Criterion {
    id: u32,
    title: &'static str,
    budget: Duration,
    run: fn(Exec) -> CheckReport,
}

fn criteria() -> Vec<Criterion> {
    let min = |m: u64| Duration::from_secs(60 * m);
    vec![
        Criterion { id: 1, title: "dimension matching on A1, A2, G2", budget: min(2), run: |e| verify::dim_match_grid(&["A1", "A2", "G2"], e) },
        Criterion { id: 2, title: "oper slope equals canonical slope", budget: min(5), run: |e| verify::slope_agreement(&["A1", "A2"], 100, SEED, e) },
        Criterion { id: 3, title: "minimal-form round trip", budget: min(5), run: |e| verify::minimal_form_round_trip(&["A1", "A2"], 50, SEED, e) },
        Criterion { id: 4, title: "fiber independence", budget: min(2), run: |e| verify::fiber_independence(&["A1", "A2"], 20, SEED, e) },
        Criterion { id: 5, title: "Hitchin image lattice", budget: min(2), run: |e| verify::hitchin_image(50, 5, SEED, e) },
        Criterion { id: 6, title: "little Weyl group fibers", budget: min(1), run: |e| verify::little_weyl_fibers(20, SEED, e) },
        Criterion { id: 7, title: "Langlands recipe coherence", budget: min(2), run: |e| verify::langlands_coherence(20, SEED, e) },
        Criterion { id: 8, title: "Airy connections", budget: min(1), run: |_| verify::airy_checks(&["A1", "A2"]) },
        Criterion { id: 9, title: "K-type structure", budget: min(2), run: |e| verify::ktype_structure(50, SEED, e) },
        Criterion { id: 10, title: "structural invariants", budget: min(1), run: |e| verify::structural_invariants(&verify::SUPPORTED, e) },
    ]
}

fn main() {
    let exec = Exec::from_env();
    let mut failed = 0;
    for c in criteria() {
        let start = Instant::now();
        let report = (c.run)(exec);
        let elapsed = start.elapsed();
        let ok = report.passed() && elapsed <= c.budget;
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {:>2}: {} ({} cases, {:.1}s of {}s)",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.title,
            report.cases,
            elapsed.as_secs_f64(),
            c.budget.as_secs()
        );
        for f in report.failures.iter().take(5) {
            println!("    {f}");
        }
        if elapsed > c.budget {
            println!("    over time budget");
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

// Scratch measurement harness; deleted before finalizing.
use performability::params::SystemParams;
use performability::solver::{BalanceSolver, SolverConfig};
use std::time::Instant;

#[test]
#[ignore]
fn measure_fig8_point() {
    for xi in [0.001, 0.002, 0.004] {
        let mut p = SystemParams::new(500, 1000, 70.0, 0.25, xi, 0.001, 0.5, 0.5);
        p.xi = xi;
        let t0 = Instant::now();
        let solver = BalanceSolver::new(&p);
        let build = t0.elapsed();
        let t1 = Instant::now();
        let sol = solver.solve(&SolverConfig::default()).unwrap();
        println!(
            "xi={xi}: build {build:?}, solve {:?}, iters {}, converged {}, mql {:.3}, thrp {:.4}, residual {:.3e}",
            t1.elapsed(),
            sol.report.iterations,
            sol.report.converged,
            sol.metrics.mql,
            sol.metrics.thrp,
            sol.report.final_residual
        );
    }
}

#[test]
#[ignore]
fn measure_big_solve() {
    let p = SystemParams::new(1000, 2000, 70.0, 0.25, 0.001, 0.001, 0.5, 0.5);
    let t0 = Instant::now();
    let solver = BalanceSolver::new(&p);
    let build = t0.elapsed();
    let t1 = Instant::now();
    let sol = solver.solve(&SolverConfig::default()).unwrap();
    println!(
        "S=1000: build {build:?}, solve {:?}, iters {}, converged {}, mql {:.3}, residual {:.3e}",
        t1.elapsed(),
        sol.report.iterations,
        sol.report.converged,
        sol.metrics.mql,
        sol.report.final_residual
    );
    let vmhwm = std::fs::read_to_string("/proc/self/status")
        .unwrap()
        .lines()
        .find(|l| l.starts_with("VmHWM"))
        .map(|l| l.to_string());
    println!("{vmhwm:?}");
}

#[test]
#[ignore]
fn measure_des_tables_point() {
    use performability::sim::{simulate, SimConfig};
    let p = SystemParams::new(50, 100, 12.0, 0.25, 0.001, 0.001, 0.5, 0.5);
    let cfg = SimConfig { seed: 42, ..SimConfig::default() }.with_horizon(1e6);
    let t0 = Instant::now();
    let r = simulate(&p, &cfg).unwrap();
    println!(
        "S=50 lambda=12: {:?}, events {}, mql {:.3} ± {:.3}, thrp {:.4} ± {:.4}",
        t0.elapsed(),
        r.total_events,
        r.mql.mean,
        r.mql.half_width,
        r.thrp.mean,
        r.thrp.half_width
    );
}

#[test]
#[ignore]
fn measure_head_sensitivity() {
    // THRP at lambda=70 while xi_h rises; MQL while eta_h falls.
    for delta in [1e-3, 1e-4, 1e-5] {
        for xi_h in [0.001, 0.01] {
            let p = SystemParams::new(500, 1000, 70.0, 0.25, 0.001, xi_h, 0.5, 0.5);
            let t0 = Instant::now();
            let sol = BalanceSolver::new(&p)
                .solve(&SolverConfig::default().with_delta(delta).with_max_iterations(20_000))
                .unwrap();
            println!(
                "delta={delta:.0e} xi_h={xi_h}: thrp {:.8}, mql {:.4}, p_block {:.6e}, iters {}, conv {}, {:?}",
                sol.metrics.thrp,
                sol.metrics.mql,
                sol.metrics.p_block,
                sol.report.iterations,
                sol.report.converged,
                t0.elapsed()
            );
        }
    }
    for eta_h in [0.5, 0.05, 0.005] {
        let p = SystemParams::new(500, 1000, 70.0, 0.25, 0.001, 0.001, 0.5, eta_h);
        let t0 = Instant::now();
        let sol = BalanceSolver::new(&p)
            .solve(&SolverConfig::default())
            .unwrap();
        println!(
            "eta_h={eta_h}: mql {:.4}, thrp {:.6}, iters {}, {:?}",
            sol.metrics.mql,
            sol.metrics.thrp,
            sol.report.iterations,
            t0.elapsed()
        );
    }
}

#[test]
#[ignore]
fn measure_trend_grid() {
    use performability::params::Semantics;
    for semantics in [Semantics::PaperLiteral, Semantics::PerComputingNode] {
        for xi in [0.001, 0.002, 0.004] {
            for lambda in [10.0, 40.0, 70.0, 100.0] {
                let p = SystemParams::new(500, 1000, lambda, 0.25, xi, 0.001, 0.5, 0.5)
                    .with_semantics(semantics);
                let t0 = Instant::now();
                let sol = BalanceSolver::new(&p)
                    .solve(&SolverConfig::default().with_delta(1e-4).with_max_iterations(30_000))
                    .unwrap();
                println!(
                    "{:?} xi={xi} lambda={lambda}: mql {:.6}, iters {}, conv {}, {:?}",
                    semantics,
                    sol.metrics.mql,
                    sol.report.iterations,
                    sol.report.converged,
                    t0.elapsed()
                );
            }
        }
    }
}

#[test]
#[ignore]
fn measure_tables_discrepancies() {
    use performability::sim::{simulate, SimConfig};
    for lambda in [5.0, 10.0, 12.0] {
        let p = SystemParams::new(50, 100, lambda, 0.25, 0.001, 0.001, 0.5, 0.5);
        let solver = BalanceSolver::new(&p);
        let sol = solver.solve(&SolverConfig::default().with_delta(1e-8)).unwrap();
        let cfg = SimConfig { seed: 42, ..SimConfig::default() }.with_horizon(1e6);
        let r = simulate(&p, &cfg).unwrap();
        let (exact_field, exact_m) = performability::oracle::exact_stationary(&p).unwrap();
        let _ = exact_field;
        println!(
            "lambda={lambda}: analytic mql {:.4} thrp {:.5} mrt {:.5} | exact mql {:.4} | des mql {:.4}±{:.3} thrp {:.5} mrt {:.5} | disc mql {:.3}% thrp {:.3}% mrt {:.3}%",
            sol.metrics.mql,
            sol.metrics.thrp,
            sol.metrics.mrt.unwrap(),
            exact_m.mql,
            r.mql.mean,
            r.mql.half_width,
            r.thrp.mean,
            r.mrt.unwrap().mean,
            100.0 * (sol.metrics.mql - r.mql.mean).abs() / r.mql.mean,
            100.0 * (sol.metrics.thrp - r.thrp.mean).abs() / r.thrp.mean,
            100.0 * (sol.metrics.mrt.unwrap() - r.mrt.unwrap().mean).abs() / r.mrt.unwrap().mean,
        );
    }
}

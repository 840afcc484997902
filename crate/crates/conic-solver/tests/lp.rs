use conic_solver::linalg::{dot, Lu, Mat};
use conic_solver::{check_lp_infeasible, check_lp_optimal, solve_lp, LpProblem, LpStatus};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// Optimal value by enumerating all basic solutions. With x >= 0 the
/// feasible region is pointed, so feasibility implies a feasible vertex.
fn vertex_optimum(p: &LpProblem) -> Option<f64> {
    let m = p.a.rows;
    let n = p.a.cols;
    let mut best: Option<f64> = None;
    let mut subset: Vec<usize> = (0..m).collect();
    loop {
        let mut bmat = Mat::zeros(m, m);
        for (k, &j) in subset.iter().enumerate() {
            for i in 0..m {
                bmat[(i, k)] = p.a[(i, j)];
            }
        }
        if let Ok(lu) = Lu::factor(&bmat) {
            let xb = lu.solve(&p.b);
            if xb.iter().all(|&v| v >= -1e-9) {
                let cost: f64 = subset.iter().zip(&xb).map(|(&j, &v)| p.c[j] * v).sum();
                best = Some(match best {
                    None => cost,
                    Some(b) => b.min(cost),
                });
            }
        }
        // next m-combination of 0..n
        let mut i = m;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if subset[i] != i + n - m {
                subset[i] += 1;
                for k in i + 1..m {
                    subset[k] = subset[k - 1] + 1;
                }
                break;
            }
        }
    }
}

#[test]
fn textbook_lp() {
    // max x + y s.t. x + 2y <= 4, 3x + y <= 6  =>  min -(x+y), slacks s1 s2.
    let a = Mat::from_rows(&[vec![1.0, 2.0, 1.0, 0.0], vec![3.0, 1.0, 0.0, 1.0]]);
    let p = LpProblem::new(a, vec![4.0, 6.0], vec![-1.0, -1.0, 0.0, 0.0]).unwrap();
    let s = solve_lp(&p).unwrap();
    assert_eq!(s.status, LpStatus::Optimal);
    // Vertex x = 8/5, y = 6/5.
    assert!((s.objective - (-14.0 / 5.0)).abs() < 1e-9);
    check_lp_optimal(&p, &s, 1e-8).unwrap();
}

#[test]
fn infeasible_lp_reports_farkas() {
    // x1 + x2 = -1 with x >= 0.
    let a = Mat::from_rows(&[vec![1.0, 1.0]]);
    let p = LpProblem::new(a, vec![-1.0], vec![0.0, 0.0]).unwrap();
    let s = solve_lp(&p).unwrap();
    assert_eq!(s.status, LpStatus::Infeasible);
    check_lp_infeasible(&p, s.farkas.as_ref().unwrap(), 1e-8).unwrap();
}

#[test]
fn infeasible_pair_of_rows() {
    // x1 - x2 = 1 and x1 - x2 = -1.
    let a = Mat::from_rows(&[vec![1.0, -1.0], vec![1.0, -1.0]]);
    let p = LpProblem::new(a, vec![1.0, -1.0], vec![1.0, 1.0]).unwrap();
    let s = solve_lp(&p).unwrap();
    assert_eq!(s.status, LpStatus::Infeasible);
    check_lp_infeasible(&p, s.farkas.as_ref().unwrap(), 1e-8).unwrap();
}

#[test]
fn unbounded_lp() {
    // min -x with x - y = 0: ray x = y -> inf.
    let a = Mat::from_rows(&[vec![1.0, -1.0]]);
    let p = LpProblem::new(a, vec![0.0], vec![-1.0, 0.0]).unwrap();
    let s = solve_lp(&p).unwrap();
    assert_eq!(s.status, LpStatus::Unbounded);
}

#[test]
fn degenerate_lp_terminates() {
    // Multiple identical rows and a degenerate vertex.
    let a = Mat::from_rows(&[
        vec![1.0, 1.0, 1.0, 0.0],
        vec![1.0, 1.0, 1.0, 0.0],
        vec![1.0, -1.0, 0.0, 1.0],
    ]);
    let p = LpProblem::new(a, vec![1.0, 1.0, 0.0], vec![-1.0, -2.0, 0.0, 0.0]).unwrap();
    let s = solve_lp(&p).unwrap();
    assert_eq!(s.status, LpStatus::Optimal);
    assert!((s.objective - (-2.0)).abs() < 1e-9);
    check_lp_optimal(&p, &s, 1e-8).unwrap();
}

#[test]
fn random_lps_match_vertex_enumeration() {
    let mut rng = ChaCha20Rng::seed_from_u64(77);
    let mut solved = 0;
    for _case in 0..120 {
        let m = rng.gen_range(1..=3usize);
        let n = rng.gen_range(m + 1..=6usize);
        let mut rows = Vec::new();
        for _ in 0..m {
            rows.push((0..n).map(|_| rng.gen_range(-2.0f64..2.0)).collect::<Vec<_>>());
        }
        let a = Mat::from_rows(&rows);
        let b: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0f64..2.0)).collect();
        let c: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0f64..1.0)).collect();
        let p = LpProblem::new(a, b, c).unwrap();
        let s = solve_lp(&p).unwrap();
        match s.status {
            LpStatus::Optimal => {
                let v = vertex_optimum(&p).expect("simplex found a vertex, oracle must too");
                assert!(
                    (s.objective - v).abs() < 1e-7 * (1.0 + v.abs()),
                    "case {_case}: simplex {} vs oracle {v}",
                    s.objective
                );
                check_lp_optimal(&p, &s, 1e-7).unwrap();
                solved += 1;
            }
            LpStatus::Infeasible => {
                assert!(vertex_optimum(&p).is_none(), "case {_case}: oracle found a vertex");
                check_lp_infeasible(&p, s.farkas.as_ref().unwrap(), 1e-7).unwrap();
            }
            LpStatus::Unbounded => {
                // Oracle cannot confirm directly; feasibility must hold.
                assert!(vertex_optimum(&p).is_some(), "case {_case}: unbounded but infeasible");
            }
            LpStatus::Stalled => panic!("case {_case}: stalled"),
        }
    }
    assert!(solved > 20, "too few solvable cases ({solved}) to be meaningful");
}

#[test]
fn row_permutation_does_not_change_optimum() {
    let mut rng = ChaCha20Rng::seed_from_u64(78);
    let rows: Vec<Vec<f64>> = (0..3)
        .map(|_| (0..6).map(|_| rng.gen_range(-2.0f64..2.0)).collect())
        .collect();
    let a0 = Mat::from_rows(&rows);
    let x0: Vec<f64> = (0..6).map(|_| rng.gen_range(0.0f64..1.0)).collect();
    let b = a0.matvec(&x0);
    let c: Vec<f64> = (0..6).map(|_| rng.gen_range(0.0f64..1.0)).collect();
    let p1 = LpProblem::new(Mat::from_rows(&rows), b.clone(), c.clone()).unwrap();
    let perm = [2usize, 0, 1];
    let rows2: Vec<Vec<f64>> = perm.iter().map(|&i| rows[i].clone()).collect();
    let b2: Vec<f64> = perm.iter().map(|&i| b[i]).collect();
    let p2 = LpProblem::new(Mat::from_rows(&rows2), b2, c).unwrap();
    let s1 = solve_lp(&p1).unwrap();
    let s2 = solve_lp(&p2).unwrap();
    assert_eq!(s1.status, LpStatus::Optimal);
    assert_eq!(s2.status, LpStatus::Optimal);
    assert!((s1.objective - s2.objective).abs() < 1e-8);
}

#[test]
fn duality_holds_on_random_feasible_problems() {
    let mut rng = ChaCha20Rng::seed_from_u64(79);
    for _ in 0..40 {
        let m = rng.gen_range(1..=3usize);
        let n = rng.gen_range(m + 2..=7usize);
        let mut rows = Vec::new();
        for _ in 0..m {
            rows.push((0..n).map(|_| rng.gen_range(-1.0f64..1.0)).collect::<Vec<_>>());
        }
        let a = Mat::from_rows(&rows);
        // Force feasibility: b = A x0 for a random nonnegative x0.
        let x0: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0f64..1.0)).collect();
        let b = a.matvec(&x0);
        // Force boundedness: nonnegative costs.
        let c: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0f64..1.0)).collect();
        let p = LpProblem::new(a, b, c).unwrap();
        let s = solve_lp(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((dot(&p.b, &s.dual) - s.objective).abs() < 1e-7 * (1.0 + s.objective.abs()));
        check_lp_optimal(&p, &s, 1e-7).unwrap();
    }
}

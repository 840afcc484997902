use conic_solver::linalg::{symmetric_eigen, Mat};
use conic_solver::{
    check_sdp_solution, solve_lp, solve_sdp, BlockDim, LpProblem, SdpProblem, SdpStatus, SparseSym,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn random_sym(rng: &mut ChaCha20Rng, n: usize) -> Mat {
    let mut m = Mat::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = rng.gen_range(-1.0f64..1.0);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

#[test]
fn scalar_lmi_has_known_optimum() {
    // min x s.t. [[x, 1], [1, x]] >= 0  =>  x* = 1.
    let mut f0 = SparseSym::new();
    f0.push(0, 0, 1, 1.0);
    let mut f1 = SparseSym::new();
    f1.push(0, 0, 0, 1.0);
    f1.push(0, 1, 1, 1.0);
    let p = SdpProblem::new(vec![BlockDim::Dense(2)], vec![1.0], f0, vec![f1]);
    let sol = solve_sdp(&p).unwrap();
    assert_eq!(sol.status, SdpStatus::Converged);
    assert!((sol.x[0] - 1.0).abs() < 1e-6, "x = {}", sol.x[0]);
    check_sdp_solution(&p, &sol, 1e-6).unwrap();
}

#[test]
fn largest_eigenvalue_via_lmi() {
    let mut rng = ChaCha20Rng::seed_from_u64(31);
    for n in [3usize, 6] {
        let a = random_sym(&mut rng, n);
        let lam_max = *symmetric_eigen(&a).unwrap().0.last().unwrap();
        // min t s.t. tI - A >= 0.
        let mut f0 = SparseSym::new();
        for i in 0..n {
            for j in i..n {
                if a[(i, j)] != 0.0 {
                    f0.push(0, i, j, -a[(i, j)]);
                }
            }
        }
        let mut f1 = SparseSym::new();
        for i in 0..n {
            f1.push(0, i, i, 1.0);
        }
        let p = SdpProblem::new(vec![BlockDim::Dense(n)], vec![1.0], f0, vec![f1]);
        let sol = solve_sdp(&p).unwrap();
        assert_eq!(sol.status, SdpStatus::Converged);
        assert!(
            (sol.objective - lam_max).abs() < 1e-6 * (1.0 + lam_max.abs()),
            "ipm {} vs eigen {lam_max}",
            sol.objective
        );
        check_sdp_solution(&p, &sol, 1e-6).unwrap();
    }
}

/// Smallest eigenvalue through the density-matrix program
/// min <C, X> s.t. X >= 0, tr X = 1, with X parameterised entrywise.
#[test]
fn density_matrix_optimum_is_min_eigenvalue() {
    let mut rng = ChaCha20Rng::seed_from_u64(32);
    let n = 4usize;
    let cmat = random_sym(&mut rng, n);
    let lam_min = symmetric_eigen(&cmat).unwrap().0[0];

    let mut fs = Vec::new();
    let mut c = Vec::new();
    let mut trace_row = Vec::new();
    for i in 0..n {
        for j in i..n {
            let mut f = SparseSym::new();
            f.push(0, i, j, 1.0);
            fs.push(f);
            c.push(if i == j { cmat[(i, j)] } else { 2.0 * cmat[(i, j)] });
            trace_row.push(if i == j { 1.0 } else { 0.0 });
        }
    }
    let a = Mat::from_rows(&[trace_row]);
    let p = SdpProblem::new(vec![BlockDim::Dense(n)], c, SparseSym::new(), fs)
        .with_equalities(a, vec![1.0]);
    let sol = solve_sdp(&p).unwrap();
    assert_eq!(sol.status, SdpStatus::Converged);
    assert!(
        (sol.objective - lam_min).abs() < 1e-6 * (1.0 + lam_min.abs()),
        "ipm {} vs eigen {lam_min}",
        sol.objective
    );
    check_sdp_solution(&p, &sol, 1e-6).unwrap();
}

/// A pure LP posed as a diagonal-block SDP must match the simplex solver.
#[test]
fn diagonal_block_matches_simplex() {
    let a = Mat::from_rows(&[vec![1.0, 2.0, 1.0, 0.0], vec![3.0, 1.0, 0.0, 1.0]]);
    let b = vec![4.0, 6.0];
    let c = vec![-1.0, -1.0, 0.0, 0.0];
    let lp = LpProblem::new(a.clone(), b.clone(), c.clone()).unwrap();
    let ls = solve_lp(&lp).unwrap();

    let n = 4;
    let mut fs = Vec::new();
    for j in 0..n {
        let mut f = SparseSym::new();
        f.push(0, j, j, 1.0);
        fs.push(f);
    }
    let p = SdpProblem::new(vec![BlockDim::Diag(n)], c, SparseSym::new(), fs)
        .with_equalities(a, b);
    let sol = solve_sdp(&p).unwrap();
    assert_eq!(sol.status, SdpStatus::Converged);
    assert!(
        (sol.objective - ls.objective).abs() < 1e-6,
        "ipm {} vs simplex {}",
        sol.objective,
        ls.objective
    );
    check_sdp_solution(&p, &sol, 1e-6).unwrap();
}

/// Mixed dense and diagonal blocks sharing variables: bound an eigenvalue
/// from below while a diagonal block caps the variable.
#[test]
fn mixed_blocks_and_duals_are_consistent() {
    let mut rng = ChaCha20Rng::seed_from_u64(33);
    let n = 3usize;
    let a = random_sym(&mut rng, n);
    let lam_max = *symmetric_eigen(&a).unwrap().0.last().unwrap();
    let cap = lam_max + 0.5;
    // min t s.t. tI - A >= 0 (dense), cap - t >= 0 (diag).
    let mut f0 = SparseSym::new();
    for i in 0..n {
        for j in i..n {
            f0.push(0, i, j, -a[(i, j)]);
        }
    }
    f0.push(1, 0, 0, cap);
    let mut f1 = SparseSym::new();
    for i in 0..n {
        f1.push(0, i, i, 1.0);
    }
    f1.push(1, 0, 0, -1.0);
    let p = SdpProblem::new(
        vec![BlockDim::Dense(n), BlockDim::Diag(1)],
        vec![1.0],
        f0,
        vec![f1],
    );
    let sol = solve_sdp(&p).unwrap();
    assert_eq!(sol.status, SdpStatus::Converged);
    assert!((sol.objective - lam_max).abs() < 1e-6 * (1.0 + lam_max.abs()));
    check_sdp_solution(&p, &sol, 1e-6).unwrap();
    // Dual matrix certifies: <F1, Y> = c_1 exactly at stationarity.
    let station = p.fs[0].inner(&sol.y_mat);
    assert!((station - 1.0).abs() < 1e-6);
}

#[test]
fn infeasible_start_converges() {
    // Feasibility region far from the identity start: x pinned by equality.
    let mut f1 = SparseSym::new();
    f1.push(0, 0, 0, 1.0);
    let a = Mat::from_rows(&[vec![1.0]]);
    let p = SdpProblem::new(vec![BlockDim::Dense(1)], vec![0.0], SparseSym::new(), vec![f1])
        .with_equalities(a, vec![250.0]);
    let sol = solve_sdp(&p).unwrap();
    assert_eq!(sol.status, SdpStatus::Converged);
    assert!((sol.x[0] - 250.0).abs() < 1e-4);
}

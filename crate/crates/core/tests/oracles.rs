#![allow(clippy::needless_range_loop)]

mod common;

use common::{oracle_field, oracle_left_flux, oracle_right_flux};
use nalgebra::DVector;
use proptest::prelude::*;
use wavesource::experiment::Scenario;
use wavesource::{
    assemble_single, example, flux, measured_flux, solve_direct, BoundaryData, BoundaryEnd, DataMesh, Example,
    FluxScaling, ForceVector, GridSpec, InitialData, SourceModel, WaveProblem,
};

fn small_instance() -> impl Strategy<Value = (usize, usize, f64, Vec<f64>)> {
    (2usize..=4, 1usize..=4, 0.05f64..=1.0).prop_flat_map(|(m, n, r)| {
        (
            Just(m),
            Just(n),
            Just(r),
            prop::collection::vec(-2.0f64..2.0, 4 * 5 + 5 * 5 + 10),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn direct_solver_matches_scalar_recurrence((m, n, r, pool) in small_instance()) {
        let length = 1.3;
        let c = 0.7;
        // r = c (T / N) / (L / M)
        let horizon = r * n as f64 * length / (m as f64 * c);
        let grid = GridSpec::new(length, horizon, m, n, c).unwrap();
        let mut it = pool.into_iter();
        let mut take = |k: usize| (&mut it).take(k).collect::<Vec<f64>>();
        let u0 = take(m + 1);
        let v0 = take(m + 1);
        let mut p0 = take(n + 1);
        let mut pl = take(n + 1);
        p0[0] = u0[0];
        pl[0] = u0[m];
        let force: Vec<Vec<f64>> = (0..=m).map(|_| take(n + 1)).collect();

        let expected = oracle_field(length, horizon, m, n, c, &u0, &v0, &p0, &pl, &force);
        let samples = nalgebra::DMatrix::from_fn(m + 1, n + 1, |i, j| force[i][j]);
        let problem = WaveProblem::new(
            grid,
            InitialData::new(u0, v0),
            BoundaryData::new(p0, pl),
            SourceModel::Known(samples),
        ).unwrap();
        let field = solve_direct(&problem).unwrap();
        for i in 0..=m {
            for j in 0..=n {
                prop_assert!((field.at(i, j) - expected[i][j]).abs() <= 1e-12 * (1.0 + expected[i][j].abs()));
            }
        }
        if m >= 2 {
            let dx = length / m as f64;
            let left = flux(&field, BoundaryEnd::Left).unwrap();
            let right = flux(&field, BoundaryEnd::Right).unwrap();
            for (a, b) in left.values().iter().zip(oracle_left_flux(&expected, dx)) {
                prop_assert!((a - b).abs() <= 1e-10 * (1.0 + b.abs()));
            }
            for (a, b) in right.values().iter().zip(oracle_right_flux(&expected, dx)) {
                prop_assert!((a - b).abs() <= 1e-10 * (1.0 + b.abs()));
            }
        }
    }

    #[test]
    fn flux_is_background_plus_matrix_product(
        m in 3usize..=12,
        f in prop::collection::vec(-3.0f64..3.0, 11),
        seed in 0u64..4,
    ) {
        let ex = Example::SINGLE_SOURCE[seed as usize];
        let grid = GridSpec::unit(m, m).unwrap();
        let (problem, _) = example(ex, &grid).unwrap();
        let measured = measured_flux(ex, &grid, BoundaryEnd::Left).unwrap();
        let sys = assemble_single(&problem, &measured).unwrap();
        let force = ForceVector::single(f[..m - 1].to_vec());

        let resolved = problem.with_source(problem.source().with_force(&force).unwrap()).unwrap();
        let direct = flux(&solve_direct(&resolved).unwrap(), BoundaryEnd::Left).unwrap();
        let predicted = &sys.predicted_flux(&force).unwrap()[0];
        for (a, b) in predicted.values().iter().zip(direct.values()) {
            prop_assert!((a - b).abs() <= 1e-10 * (1.0 + b.abs()));
        }
    }
}

#[test]
fn same_mesh_data_is_consistent_with_exact_force() {
    let grid = GridSpec::unit(80, 80).unwrap();
    for ex in [Example::Two, Example::Three, Example::Four] {
        for scaling in [FluxScaling::Stencil, FluxScaling::Derivative] {
            let (sys, exact) = Scenario::new(ex, grid).with_scaling(scaling).system().unwrap();
            let r = sys.residual(&exact.force).unwrap();
            let scale = sys.rhs().amax().max(1.0);
            assert!(r.amax() <= 1e-10 * scale, "example {}: residual {}", ex.id(), r.amax());
        }
    }
}

#[test]
fn refined_data_mesh_converges_to_same_mesh_flux() {
    let grid = GridSpec::unit(20, 20).unwrap();
    let coarse = wavesource::measured_flux_on(Example::Two, &grid, BoundaryEnd::Left, DataMesh::Same).unwrap();
    let fine = wavesource::measured_flux_on(Example::Two, &grid, BoundaryEnd::Left, DataMesh::Refined(4)).unwrap();
    let one = wavesource::measured_flux_on(Example::Two, &grid, BoundaryEnd::Left, DataMesh::Refined(1)).unwrap();
    assert_eq!(coarse, one);
    let gap = coarse
        .values()
        .iter()
        .zip(fine.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(gap > 0.0 && gap < 0.02, "gap {gap}");
}

#[test]
fn analytic_example_one_field_is_reproduced() {
    let grid = GridSpec::unit(80, 80).unwrap();
    let (p, exact) = example(Example::One, &grid).unwrap();
    let field = solve_direct(&p.with_source(p.source().with_force(&exact.force).unwrap()).unwrap()).unwrap();
    let err = field.max_abs_error(|x, t| Example::One.exact_u(x, t).unwrap());
    assert!(err < 1e-3, "max error {err}");
}

#[test]
fn dual_example_flux_approaches_analytic_flux() {
    let grid = GridSpec::unit(80, 80).unwrap();
    let (p, exact) = example(Example::Five, &grid).unwrap();
    let field = solve_direct(&p.with_source(p.source().with_force(&exact.force).unwrap()).unwrap()).unwrap();
    for end in [BoundaryEnd::Left, BoundaryEnd::Right] {
        let numeric = flux(&field, end).unwrap();
        let analytic = measured_flux(Example::Five, &grid, end).unwrap();
        let gap = DVector::from_iterator(80, numeric.values().iter().zip(analytic.values()).map(|(a, b)| a - b)).amax();
        assert!(gap < 0.02, "{} gap {gap}", end.name());
    }
}

//! The four subcommands.

use anyhow::{Context, Result};
use wavesource::benchmarks::reference_lambda;
use wavesource::experiment::{invert as invert_example, Scenario};
use wavesource::regularization::tikhonov_solve;
use wavesource::{
    add_noise, condition_number, corner_with, example, flux, normalized_singular_values, solve_direct, sweep,
    Assembler, BoundaryData, BoundaryEnd, DataMesh, Error, ExactSolution, Example, FluxSeries, GridSpec, InitialData,
    InverseSystem, NoiseSpec, RegConfig, RegOrder, SourceModel, WaveField, WaveProblem,
};

use crate::config::{LambdaChoice, RunConfig};
use crate::output::{key_values, num, read_column, read_space_time, table, OutDir};

const TABLE_SIZES: [usize; 4] = [10, 20, 40, 80];
const TABLE_TIMES: [f64; 5] = [0.1, 0.2, 0.8, 0.9, 1.0];
const TABLE_NOISE: [u32; 3] = [1, 3, 5];

fn chosen_example(cfg: &RunConfig) -> Result<Option<Example>> {
    Ok(cfg.settings.example.map(Example::from_id).transpose()?)
}

fn data_mesh(cfg: &RunConfig) -> DataMesh {
    cfg.settings.data_refine.map_or(DataMesh::Same, DataMesh::Refined)
}

fn noise(cfg: &RunConfig) -> Result<NoiseSpec> {
    Ok(NoiseSpec::from_percent(cfg.noise_pct(), cfg.seed())?)
}

fn required<'a, T>(value: &'a Option<T>, flag: &str) -> Result<&'a T> {
    value
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter(format!("--{flag} is required when no --example is given")).into())
}

/// Initial and boundary data from files, with the given source.
fn external_problem(cfg: &RunConfig, source: SourceModel) -> Result<WaveProblem> {
    let s = &cfg.settings;
    let init = InitialData::new(
        read_column(required(&s.u0, "u0")?)?,
        read_column(required(&s.v0, "v0")?)?,
    );
    let bc = BoundaryData::new(
        read_column(required(&s.p0, "p0")?)?,
        read_column(required(&s.pl, "pl")?)?,
    );
    Ok(WaveProblem::new(cfg.grid, init, bc, source)?)
}

fn write_field(out: &OutDir, field: &WaveField) -> Result<()> {
    let u = field.values();
    out.write(
        "field.csv",
        &table(None, u.row_iter().map(|r| r.iter().copied().collect())),
    )?;
    for end in [BoundaryEnd::Left, BoundaryEnd::Right] {
        let q = flux(field, end)?;
        let rows = (1..=q.len()).map(|j| vec![field.grid().t(j), q.at(j)]);
        out.write(&format!("flux_{}.csv", end.name()), &table(Some("t,flux"), rows))?;
    }
    Ok(())
}

pub fn direct(cfg: &RunConfig) -> Result<()> {
    let problem = match chosen_example(cfg)? {
        Some(ex) => {
            let (p, exact) = example(ex, &cfg.grid)?;
            p.with_source(p.source().with_force(&exact.force)?)?
        }
        None => {
            let force = read_space_time(required(&cfg.settings.force, "force")?, &cfg.grid)?;
            external_problem(cfg, SourceModel::Known(force))?
        }
    };
    let field = solve_direct(&problem)?;
    let out = OutDir::create(cfg)?;
    write_field(&out, &field)
}

/// Assembled system plus the exact force when it is known.
fn inverse_system(cfg: &RunConfig) -> Result<(InverseSystem, Option<ExactSolution>)> {
    let spec = noise(cfg)?;
    if let Some(ex) = chosen_example(cfg)? {
        let (sys, exact) = Scenario::new(ex, cfg.grid)
            .with_noise(spec)
            .with_scaling(cfg.scaling())
            .with_data_mesh(data_mesh(cfg))
            .system()?;
        return Ok((sys, Some(exact)));
    }
    let s = &cfg.settings;
    let grid = &cfg.grid;
    let measured =
        |path, end| -> Result<FluxSeries> { Ok(add_noise(&FluxSeries::new(end, read_column(path)?), &spec)) };
    let h = read_space_time(required(&s.h, "h")?, grid)?;
    let assembler = Assembler::new(cfg.scaling());
    let left = measured(required(&s.flux_left, "flux-left")?, BoundaryEnd::Left)?;
    let mut sys = match &s.theta {
        Some(theta) => {
            let theta = read_space_time(theta, grid)?;
            let problem = external_problem(
                cfg,
                SourceModel::Dual {
                    h,
                    theta,
                    f: None,
                    g: None,
                },
            )?;
            let right = measured(required(&s.flux_right, "flux-right")?, BoundaryEnd::Right)?;
            assembler.dual(&problem, &left, &right)?
        }
        None => assembler.single(&external_problem(cfg, SourceModel::Single { h, f: None })?, &left)?,
    };
    sys.noise = Some(spec);
    Ok((sys, None))
}

fn pick_lambda(cfg: &RunConfig, sys: &InverseSystem) -> Result<f64> {
    match cfg.lambda {
        LambdaChoice::Fixed(l) => Ok(l),
        LambdaChoice::Lcurve => {
            let curve = sweep(sys, cfg.order, &cfg.lambdas)?;
            Ok(corner_with(&curve.points, cfg.corner_axes()).context("locating the L-curve corner")?)
        }
    }
}

pub fn invert(cfg: &RunConfig) -> Result<()> {
    let (sys, exact) = inverse_system(cfg)?;
    let lambda = pick_lambda(cfg, &sys)?;
    let rc = RegConfig::new(cfg.order, lambda)?;
    let force = tikhonov_solve(&sys, &rc)?;
    let residual = sys.residual(&force)?.norm();

    let grid = &cfg.grid;
    let (header, rows): (&str, Vec<Vec<f64>>) = match force.g() {
        Some(g) => (
            "x,f,g",
            (0..g.len()).map(|k| vec![grid.x(k + 1), force.f()[k], g[k]]).collect(),
        ),
        None => (
            "x,f",
            force
                .f()
                .iter()
                .enumerate()
                .map(|(k, &f)| vec![grid.x(k + 1), f])
                .collect(),
        ),
    };

    let mut metrics = vec![
        ("lambda", num(lambda)),
        ("reg_order", cfg.order.k().to_string()),
        ("noise_pct", num(cfg.noise_pct())),
        ("seed", cfg.seed().to_string()),
        ("condition_number", num(condition_number(sys.matrix())?)),
        ("residual_norm", num(residual)),
    ];
    if let Some(exact) = &exact {
        let run = invert_example(&sys, exact, rc)?;
        metrics.push(("accuracy_error", num(run.accuracy_error)));
        metrics.push(("f_relative_error", num(run.f_relative_error)));
        if let Some(e) = run.g_relative_error {
            metrics.push(("g_relative_error", num(e)));
        }
    }

    let out = OutDir::create(cfg)?;
    out.write("force.csv", &table(Some(header), rows))?;
    out.write("metrics.csv", &key_values(&metrics))?;
    if cfg.settings.dump_system == Some(true) {
        let (mut a, mut b) = (Vec::new(), Vec::new());
        sys.write_csv(&mut a, &mut b)?;
        out.write_bytes("A.csv", &a)?;
        out.write_bytes("b.csv", &b)?;
    }
    Ok(())
}

pub fn lcurve(cfg: &RunConfig) -> Result<()> {
    let (sys, _) = inverse_system(cfg)?;
    let curve = sweep(&sys, cfg.order, &cfg.lambdas)?;
    let lambda = corner_with(&curve.points, cfg.corner_axes()).context("locating the L-curve corner")?;
    let out = OutDir::create(cfg)?;
    let mut csv = Vec::new();
    curve.write_csv(&mut csv)?;
    out.write_bytes("lcurve.csv", &csv)?;
    out.write("corner.txt", &format!("{}\n", num(lambda)))
}

fn example_system(
    cfg: &RunConfig,
    ex: Example,
    grid: GridSpec,
    noise: NoiseSpec,
) -> Result<(InverseSystem, ExactSolution)> {
    Ok(Scenario::new(ex, grid)
        .with_noise(noise)
        .with_scaling(cfg.scaling())
        .with_data_mesh(data_mesh(cfg))
        .system()?)
}

/// Numerical left flux of the direct problem at the tabulated times.
fn flux_row(ex: Example, m: usize) -> Result<Vec<f64>> {
    let grid = GridSpec::unit(m, m)?;
    let (p, exact) = example(ex, &grid)?;
    let field = solve_direct(&p.with_source(p.source().with_force(&exact.force)?)?)?;
    let q = flux(&field, BoundaryEnd::Left)?;
    let mut row = vec![m as f64];
    row.extend(TABLE_TIMES.iter().map(|&t| q.at((t * m as f64).round() as usize)));
    Ok(row)
}

pub fn tables(cfg: &RunConfig) -> Result<()> {
    let singles = Example::SINGLE_SOURCE;
    let mut cond_rows = Vec::new();
    for m in TABLE_SIZES {
        let grid = GridSpec::unit(m, m)?;
        let mut row = vec![m as f64];
        for ex in singles {
            let (sys, _) = example_system(cfg, ex, grid, NoiseSpec::none())?;
            row.push(condition_number(sys.matrix())?);
        }
        cond_rows.push(row);
    }

    let big = GridSpec::unit(80, 80)?;
    let mut sv_columns = Vec::new();
    for ex in singles {
        let (sys, _) = example_system(cfg, ex, big, NoiseSpec::none())?;
        sv_columns.push(normalized_singular_values(sys.matrix())?);
    }
    let sv_rows = (0..sv_columns[0].len()).map(|k| {
        let mut row = vec![(k + 1) as f64];
        row.extend(sv_columns.iter().map(|c| c[k]));
        row
    });

    let flux_header = "M,t=0.1,t=0.2,t=0.8,t=0.9,t=1";
    let table2 = TABLE_SIZES
        .iter()
        .map(|&m| flux_row(Example::One, m))
        .collect::<Result<Vec<_>>>()?;
    let table3 = TABLE_SIZES
        .iter()
        .map(|&m| flux_row(Example::Two, m))
        .collect::<Result<Vec<_>>>()?;

    let mut accuracy = Vec::new();
    for ex in [Example::Two, Example::Three, Example::Four] {
        let mut rows = Vec::new();
        for order in RegOrder::ALL {
            for pct in TABLE_NOISE {
                let lambda = reference_lambda(ex, order, pct).expect("tabulated example");
                let (sys, exact) = example_system(cfg, ex, big, NoiseSpec::from_percent(pct.into(), cfg.seed())?)?;
                let run = invert_example(&sys, &exact, RegConfig::new(order, lambda)?)?;
                rows.push(vec![order.k() as f64, pct.into(), lambda, run.accuracy_error]);
            }
        }
        accuracy.push(rows);
    }

    let out = OutDir::create(cfg)?;
    let cond_header = "M,example_1,example_2,example_3,example_4";
    out.write("table1.csv", &table(Some(cond_header), cond_rows))?;
    out.write(
        "singular_values.csv",
        &table(Some("k,example_1,example_2,example_3,example_4"), sv_rows),
    )?;
    out.write("table2.csv", &table(Some(flux_header), table2))?;
    out.write("table3.csv", &table(Some(flux_header), table3))?;
    for (name, rows) in ["table4.csv", "table5.csv", "table6.csv"].into_iter().zip(accuracy) {
        out.write(name, &table(Some("reg_order,noise_pct,lambda,accuracy_error"), rows))?;
    }
    Ok(())
}

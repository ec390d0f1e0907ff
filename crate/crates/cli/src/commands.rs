//! One function per subcommand, each producing a [`Document`].

use bqst_core::amplitude::{default_window, fidelities, find_arrival};
use bqst_core::asymptotic::{maximize_u_infinity, scaling_constants, u_infinity, AsymptoticParams};
use bqst_core::dynamics::{front_speed, front_trajectory, propagate};
use bqst_core::optimizer::{fidelity_map, optimize_with, GridAxis, OptimizeOptions, SearchMode};
use bqst_core::spectral::solve_modes;
use bqst_core::ChainSpec;
use serde_json::{json, Value};

use crate::args::{
    AmplitudeArgs, AsymptoticArgs, Boundary, DynamicsArgs, Format, MapArgs, OptimizeArgs,
};
use crate::output::{round12, Document};
use crate::CliError;

fn boundary_config(doc: &mut Document, b: &Boundary) {
    doc.config.push(("n", b.n.into()));
    doc.config.push(("x", b.x.into()));
    doc.config.push(("y", b.y.into()));
}

pub fn spectrum(b: &Boundary) -> Result<Document, CliError> {
    let sol = solve_modes(&ChainSpec::quasi_uniform(b.n, b.x, b.y)?)?;
    let mut doc = Document::new("spectrum");
    boundary_config(&mut doc, b);
    doc.summary.push(("density_sum", sol.density_sum().into()));
    doc.columns = vec!["m", "q", "omega", "density", "velocity"];
    doc.rows = sol
        .modes
        .iter()
        .map(|m| {
            vec![
                m.m().into(),
                m.q.into(),
                m.omega.into(),
                m.density.into(),
                m.velocity.into(),
            ]
        })
        .collect();
    Ok(doc)
}

pub fn amplitude(a: &AmplitudeArgs) -> Result<Document, CliError> {
    let b = &a.chain;
    let sol = solve_modes(&ChainSpec::quasi_uniform(b.n, b.x, b.y)?)?;
    let window = a.window.unwrap_or_else(|| default_window(b.n));
    let r = find_arrival(&sol, Some(window))?;
    let f = fidelities(r.peak_amplitude.min(1.0))?;
    let mut doc = Document::new("amplitude");
    boundary_config(&mut doc, b);
    doc.config.push(("window_start", window.0.into()));
    doc.config.push(("window_end", window.1.into()));
    doc.summary = vec![
        ("arrival_time", r.arrival_time.into()),
        ("peak", r.peak_amplitude.into()),
        ("delay", r.delay.into()),
        ("F", f.average.into()),
        ("F_E", f.entanglement.into()),
    ];
    doc.columns = vec!["t", "u"];
    doc.rows = r
        .t_grid
        .iter()
        .zip(&r.u_values)
        .map(|(&t, &u)| vec![t.into(), u.into()])
        .collect();
    Ok(doc)
}

pub fn optimize_cmd(a: &OptimizeArgs, format: Format) -> Result<Document, CliError> {
    if a.trace && format == Format::Csv {
        return Err(CliError::Usage("--trace needs --format json".into()));
    }
    let mode = match (a.fix_y, a.constrain_y) {
        (Some(y), _) => SearchMode::FixedY(y),
        (None, true) => SearchMode::ConstrainedY,
        (None, false) => SearchMode::TwoParam,
    };
    let opts = OptimizeOptions {
        keep_trace: a.trace,
        ..Default::default()
    };
    let r = optimize_with(a.n, mode, &opts)?;
    let mode_name = match mode {
        SearchMode::TwoParam => "two_param",
        SearchMode::FixedY(_) => "fixed_y",
        SearchMode::ConstrainedY => "constrained_Y",
    };
    let mut doc = Document::new("optimize");
    doc.config.push(("n", a.n.into()));
    doc.config.push(("mode", mode_name.into()));
    if let Some(y) = a.fix_y {
        doc.config.push(("fixed_y", y.into()));
    }
    doc.columns = vec![
        "n",
        "mode",
        "x_opt",
        "y_opt",
        "u_opt",
        "F_opt",
        "F_E_opt",
        "arrival_time",
        "delay",
        "evaluations",
        "converged",
        "on_boundary",
    ];
    doc.rows = vec![vec![
        r.n.into(),
        mode_name.into(),
        r.x_opt.into(),
        r.y_opt.into(),
        r.u_opt.into(),
        r.fidelities.average.into(),
        r.fidelities.entanglement.into(),
        r.arrival_time.into(),
        r.delay.into(),
        r.evaluations.into(),
        r.converged.into(),
        r.on_boundary.into(),
    ]];
    if a.trace {
        let trace: Vec<Value> = r
            .trace
            .iter()
            .map(|p| json!({"x": round12(p.x), "y": round12(p.y), "u": round12(p.u)}))
            .collect();
        doc.extra.push(("trace", Value::Array(trace)));
    }
    Ok(doc)
}

pub fn fidelity_map_cmd(a: &MapArgs) -> Result<Document, CliError> {
    let m = fidelity_map(a.n, a.x, a.y)?;
    let axis = |g: &GridAxis| format!("{}:{}:{}", g.start, g.end, g.steps);
    let mut doc = Document::new("fidelity-map");
    doc.config = vec![
        ("n", a.n.into()),
        ("x", axis(&a.x).into()),
        ("y", axis(&a.y).into()),
    ];
    let (i, j) = m.argmax();
    doc.summary = vec![
        ("best_x", m.x_grid[i].into()),
        ("best_y", m.y_grid[j].into()),
        ("best_F", m.f_values[i][j].into()),
    ];
    doc.columns = vec!["x", "y", "u", "F"];
    for (i, &x) in m.x_grid.iter().enumerate() {
        for (j, &y) in m.y_grid.iter().enumerate() {
            doc.rows.push(vec![
                x.into(),
                y.into(),
                m.u_values[i][j].into(),
                m.f_values[i][j].into(),
            ]);
        }
    }
    Ok(doc)
}

pub fn asymptotic(a: &AsymptoticArgs) -> Result<Document, CliError> {
    let mut doc = Document::new("asymptotic");
    let (params, u) = match (a.tau, a.sigma) {
        (Some(tau), Some(sigma)) => {
            if !(tau.is_finite() && sigma.is_finite()) {
                return Err(bqst_core::Error::domain("tau", "tau and sigma must be finite").into());
            }
            doc.config = vec![
                ("mode", "evaluate".into()),
                ("tau", tau.into()),
                ("sigma", sigma.into()),
            ];
            let p = AsymptoticParams::new(tau, sigma);
            (p, u_infinity(p))
        }
        _ => {
            doc.config = vec![("mode", "optimize".into())];
            let o = maximize_u_infinity();
            doc.summary = vec![
                ("evaluations", o.evaluations.into()),
                ("converged", o.converged.into()),
            ];
            (o.params, o.u_infinity)
        }
    };
    let c = scaling_constants(params);
    let f = fidelities(u.clamp(0.0, 1.0))?;
    doc.columns = vec![
        "tau",
        "sigma",
        "u_inf",
        "F_inf",
        "x_coefficient",
        "y_coefficient",
        "delay_coefficient",
    ];
    doc.rows = vec![vec![
        params.tau.into(),
        params.sigma.into(),
        u.into(),
        f.average.into(),
        c.x_coefficient.into(),
        c.y_coefficient.into(),
        c.delay_coefficient.into(),
    ]];
    Ok(doc)
}

pub fn dynamics(a: &DynamicsArgs) -> Result<Document, CliError> {
    let mut doc = Document::new("dynamics");
    doc.config.push(("n", a.n.into()));
    let spec = if a.perfect {
        doc.config.push(("profile", "perfect".into()));
        ChainSpec::perfect_transfer(a.n)?
    } else if a.uniform {
        doc.config.push(("profile", "uniform".into()));
        ChainSpec::uniform(a.n)?
    } else {
        let (x, y) = (a.x.unwrap_or(1.0), a.y.unwrap_or(1.0));
        doc.config.push(("profile", "quasi_uniform".into()));
        doc.config.push(("x", x.into()));
        doc.config.push(("y", y.into()));
        ChainSpec::quasi_uniform(a.n, x, y)?
    };
    let t_max = a.t_max.unwrap_or_else(|| default_window(a.n).1);
    doc.config.push(("t_max", t_max.into()));
    doc.config.push(("dt", a.dt.into()));

    let field = propagate(&spec, t_max, a.dt)?;
    let worst = field
        .frames
        .iter()
        .map(|f| (f.norm_squared() - 1.0).abs())
        .fold(0.0, f64::max);
    doc.summary.push(("frames", field.frames.len().into()));
    doc.summary.push(("max_sum_rule_error", worst.into()));
    if let Some(v) = front_speed(&front_trajectory(&field), (a.n / 4, 3 * a.n / 4)) {
        doc.summary.push(("front_speed", v.into()));
    }
    doc.columns = vec!["t", "site", "amplitude"];
    for f in &field.frames {
        for (i, &u) in f.amplitudes.iter().enumerate() {
            doc.rows.push(vec![f.t.into(), (i + 1).into(), u.into()]);
        }
    }
    Ok(doc)
}

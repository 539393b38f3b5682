use anyhow::{anyhow, bail, Context, Result};
use spinring_core::closed_form::{
    concurrence_three_site, rho12_three_site_uniform, rho12_two_site, three_site_engine_model,
    two_site_engine_model, two_site_state_concurrence, THREE_SITE_FIELD_PER_SITE,
    TWO_SITE_FIELD_PER_SITE,
};
use spinring_core::scan::{DEFAULT_BRACKET, MIN_TOLERANCE};
use spinring_core::{
    build_hamiltonian, concurrence, curve, entanglement_of_formation, find_critical_temperature,
    gibbs_state, ground_state, last_crossing, linspace, maximally_mixed, partial_trace,
    sweep_field, CriticalResult, FieldLayout, ModelSpec, SitePair,
};

use crate::args::{FigureId, RunConfig, SweepLayout, TauGrid};
use crate::output::{Cell, Table};

pub const HAMILTONIAN: &str =
    "H = (J/2) sum_bonds (sx sx + sy sy + zz_weight sz sz) + sum_n b_n sz_n";

/// Largest closed-form vs exact-diagonalization deviation accepted by `calibrate`.
pub const CALIBRATION_LIMIT: f64 = 1e-10;

const CAL_J: [f64; 4] = [-2.0, -1.0, 1.0, 2.0];
const CAL_B: [f64; 4] = [0.0, 0.5, 1.0, 2.0];
const CAL_T: [f64; 5] = [0.2, 0.5, 1.0, 2.0, 5.0];

fn header(table: &mut Table, command: &str) {
    table
        .meta("tool", format!("spinring {}", env!("CARGO_PKG_VERSION")))
        .meta("command", command)
        .meta("hamiltonian", HAMILTONIAN);
}

fn pair_label(pair: SitePair) -> String {
    format!("{}{}", pair.first() + 1, pair.second() + 1)
}

fn pair_meta(pair: SitePair) -> String {
    format!("{},{} (1-based)", pair.first() + 1, pair.second() + 1)
}

fn tau_values(grid: &TauGrid) -> Vec<f64> {
    linspace(grid.start, grid.stop, grid.count)
}

fn model(cfg: &RunConfig) -> Result<&ModelSpec> {
    let spec = cfg.model.as_ref().ok_or_else(|| anyhow!("no model"))?;
    if cfg.pair.second() >= spec.n_sites() {
        bail!(
            "pair {} out of range for {} sites",
            pair_meta(cfg.pair),
            spec.n_sites()
        );
    }
    Ok(spec)
}

fn bracket(cfg: &RunConfig, coupling: f64) -> (f64, f64) {
    cfg.bracket.unwrap_or_else(|| {
        let s = coupling.abs().max(f64::MIN_POSITIVE);
        (DEFAULT_BRACKET.0 * s, DEFAULT_BRACKET.1 * s)
    })
}

fn critical(cfg: &RunConfig, spec: &ModelSpec, pair: SitePair) -> Result<CriticalResult> {
    if cfg.scan {
        let scale = spec.coupling().abs();
        if scale == 0.0 {
            bail!("--scan uses T = tau*|J|, undefined for J = 0");
        }
        let temps: Vec<f64> = tau_values(&cfg.grid).iter().map(|t| t * scale).collect();
        Ok(last_crossing(spec, pair, &temps, cfg.tol)?)
    } else {
        let (lo, hi) = bracket(cfg, spec.coupling());
        Ok(find_critical_temperature(spec, pair, lo, hi, cfg.tol)?)
    }
}

pub fn run(cfg: &RunConfig) -> Result<Table> {
    match cfg.command.as_str() {
        "curve" => run_curve(cfg),
        "tc" => run_tc(cfg),
        "rho" => run_rho(cfg),
        "sweep" => run_sweep(cfg),
        "figure" => match cfg.figure {
            Some(FigureId::Fig1) => run_fig1(cfg),
            Some(id) => run_fig2(cfg, id),
            None => bail!("figure id missing"),
        },
        other => bail!("unknown command '{other}'"),
    }
}

fn run_curve(cfg: &RunConfig) -> Result<Table> {
    let spec = model(cfg)?;
    let c = curve(spec, cfg.pair, &tau_values(&cfg.grid))?;
    let mut t = Table::new(&["tau", "concurrence"]);
    header(&mut t, "curve");
    t.meta("model", spec.summary())
        .meta("field_mapping", "engine fields b_n as listed in model")
        .meta("pair", pair_meta(cfg.pair))
        .meta("temperature", "T = tau * |J|");
    for p in &c.points {
        t.push(vec![p.tau.into(), p.concurrence.into()]);
    }
    Ok(t)
}

fn run_tc(cfg: &RunConfig) -> Result<Table> {
    let spec = model(cfg)?;
    let r = critical(cfg, spec, cfg.pair)?;
    let mut t = Table::new(&[
        "t_c",
        "t_c_over_abs_J",
        "bracket_low",
        "bracket_high",
        "c_low",
        "c_high",
        "iterations",
    ]);
    header(&mut t, "tc");
    t.meta("model", spec.summary())
        .meta("field_mapping", "engine fields b_n as listed in model")
        .meta("pair", pair_meta(cfg.pair))
        .meta(
            "method",
            if cfg.scan {
                "tau-grid scan then bisection"
            } else {
                "bisection"
            },
        )
        .meta("tolerance", cfg.tol);
    if r.t_c.is_none() {
        t.meta(
            "note",
            format!(
                "no transition in [{}, {}]; concurrence at the ends {:.6e}, {:.6e}",
                r.search_interval.0,
                r.search_interval.1,
                r.endpoint_concurrence.0,
                r.endpoint_concurrence.1
            ),
        );
    }
    let scale = spec.coupling().abs();
    t.push(vec![
        r.t_c.into(),
        r.t_c.filter(|_| scale > 0.0).map(|x| x / scale).into(),
        r.bracket.0.into(),
        r.bracket.1.into(),
        r.endpoint_concurrence.0.into(),
        r.endpoint_concurrence.1.into(),
        Cell::Int(r.iterations as u64),
    ]);
    Ok(t)
}

fn run_rho(cfg: &RunConfig) -> Result<Table> {
    let spec = model(cfg)?;
    let temperature = cfg
        .temperature
        .ok_or_else(|| anyhow!("rho needs --temperature (0 and inf are accepted)"))?;
    let state = if temperature == 0.0 {
        ground_state(&build_hamiltonian(spec)?)?
    } else if temperature == f64::INFINITY {
        maximally_mixed(spec.dim())
    } else {
        gibbs_state(&build_hamiltonian(spec)?, temperature).with_context(|| {
            format!(
                "at J = {}, fields = {:?}, T = {temperature}",
                spec.coupling(),
                spec.fields()
            )
        })?
    };
    let reduced = partial_trace(
        &state.rho,
        &[cfg.pair.first(), cfg.pair.second()],
        spec.n_sites(),
    )?;
    let report = concurrence(&reduced)?;
    let mut t = Table::new(&["row", "col", "re", "im"]);
    header(&mut t, "rho");
    t.meta("model", spec.summary())
        .meta("pair", pair_meta(cfg.pair))
        .meta("temperature", state.temperature)
        .meta("basis", "|00>,|01>,|10>,|11> with |0> the sz = +1 state")
        .meta("concurrence", format!("{:.14e}", report.concurrence))
        .meta(
            "entanglement_of_formation",
            format!("{:.14e}", entanglement_of_formation(report.concurrence)?),
        );
    for r in 0..4 {
        for c in 0..4 {
            let z = reduced[(r, c)];
            t.push(vec![
                Cell::Int(r as u64),
                Cell::Int(c as u64),
                z.re.into(),
                z.im.into(),
            ]);
        }
    }
    Ok(t)
}

fn run_sweep(cfg: &RunConfig) -> Result<Table> {
    let spec = model(cfg)?;
    let strengths = cfg
        .strengths
        .clone()
        .ok_or_else(|| anyhow!("sweep needs --strengths, e.g. 0,0.5,1"))?;
    let (layout, mapping) = match cfg.layout {
        SweepLayout::Uniform { scale } => (
            FieldLayout::Uniform { per_site: scale },
            format!("b_n = {scale} * B on every site"),
        ),
        SweepLayout::Impurity => (
            FieldLayout::Impurity {
                site: spec.n_sites() - 1,
                scale: spec.coupling().abs(),
            },
            "b_last = B * |J|, zero elsewhere".to_string(),
        ),
    };
    let rows: Vec<(f64, Option<f64>)> = if cfg.scan {
        strengths
            .iter()
            .map(|&b| {
                let s = spec.with_fields(layout.fields(spec.n_sites(), b))?;
                Ok((b, critical(cfg, &s, cfg.pair)?.t_c))
            })
            .collect::<Result<_>>()?
    } else {
        sweep_field(
            spec,
            layout,
            cfg.pair,
            &strengths,
            bracket(cfg, spec.coupling()),
            cfg.tol,
        )?
        .into_iter()
        .map(|row| (row.field, row.result.t_c))
        .collect()
    };
    let mut t = Table::new(&["B", "t_c"]);
    header(&mut t, "sweep");
    t.meta("model", spec.summary())
        .meta("field_mapping", mapping)
        .meta("pair", pair_meta(cfg.pair))
        .meta("tolerance", cfg.tol);
    for (b, tc) in rows {
        t.push(vec![b.into(), tc.into()]);
    }
    Ok(t)
}

struct Series {
    label: String,
    spec: ModelSpec,
    pair: SitePair,
}

fn figure_table(cfg: &RunConfig, name: &str, mapping: &str, series: &[Series]) -> Result<Table> {
    let taus = tau_values(&cfg.grid);
    let mut columns = vec!["tau".to_string()];
    let mut values = Vec::new();
    let mut t = Table::default();
    header(&mut t, &format!("figure {name}"));
    t.meta("field_mapping", mapping)
        .meta("temperature", "T = tau * |J|");
    for s in series {
        let c = curve(&s.spec, s.pair, &taus).with_context(|| format!("curve {}", s.label))?;
        let temps: Vec<f64> = taus.iter().map(|x| x * s.spec.coupling().abs()).collect();
        let tc = last_crossing(&s.spec, s.pair, &temps, cfg.tol.max(MIN_TOLERANCE))?.t_c;
        t.meta(&format!("model {}", s.label), s.spec.summary());
        t.meta(
            &format!("t_c {}", s.label),
            tc.map_or("NONE".to_string(), |x| format!("{x:.14e}")),
        );
        columns.push(s.label.clone());
        values.push(c.values());
    }
    t.columns = columns;
    for (k, tau) in taus.iter().enumerate() {
        let mut row = vec![Cell::Num(*tau)];
        row.extend(values.iter().map(|v| Cell::Num(v[k])));
        t.push(row);
    }
    Ok(t)
}

fn run_fig1(cfg: &RunConfig) -> Result<Table> {
    let coupling = cfg.coupling_override.unwrap_or(-1.0);
    let strengths = cfg.strengths.clone().unwrap_or_else(|| vec![1.0, 1.5, 2.0]);
    let pair = SitePair::new(0, 1)?;
    let series = strengths
        .iter()
        .map(|&b| {
            Ok(Series {
                label: format!("C12(B={b})"),
                spec: three_site_engine_model(coupling, b)?,
                pair,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    figure_table(
        cfg,
        "fig1",
        &format!("three sites, uniform b_n = {THREE_SITE_FIELD_PER_SITE} * B"),
        &series,
    )
}

fn run_fig2(cfg: &RunConfig, id: FigureId) -> Result<Table> {
    let pair = match id {
        FigureId::Fig2a => SitePair::new(0, 1)?,
        _ => SitePair::new(0, 2)?,
    };
    let couplings = match cfg.coupling_override {
        Some(j) => vec![j],
        None => vec![1.0, -1.0],
    };
    let strengths = cfg
        .strengths
        .clone()
        .unwrap_or_else(|| vec![0.5, 1.0, 2.0, 10.0]);
    let mut series = Vec::new();
    for &j in &couplings {
        for &b in &strengths {
            series.push(Series {
                label: format!("C{}(J={j:+};B={b})", pair_label(pair)),
                spec: ModelSpec::xx_impurity_ring(3, j, b)?,
                pair,
            });
        }
    }
    figure_table(
        cfg,
        &id.to_string(),
        "three sites, impurity b_3 = B * |J| on the last site",
        &series,
    )
}

/// Closed forms against exact diagonalization; returns the table and
/// whether every deviation is within `CALIBRATION_LIMIT`.
pub fn calibrate() -> Result<(Table, bool)> {
    let mut two = (0.0f64, 0.0f64);
    let mut three = (0.0f64, 0.0f64);
    for j in CAL_J {
        for b in CAL_B {
            let h2 = build_hamiltonian(&two_site_engine_model(j, b)?)?;
            let h3 = build_hamiltonian(&three_site_engine_model(j, b)?)?;
            for t in CAL_T {
                let at = || format!("at J = {j}, B = {b}, T = {t}");
                let ed2 = gibbs_state(&h2, t).with_context(at)?.rho;
                two.0 = two.0.max(ed2.max_abs_diff(&rho12_two_site(j, b, t)?));
                let c2 = concurrence(&ed2).with_context(at)?.concurrence;
                two.1 = two.1.max((c2 - two_site_state_concurrence(j, b, t)?).abs());

                let ed3 = partial_trace(&gibbs_state(&h3, t).with_context(at)?.rho, &[0, 1], 3)?;
                let (closed, _) = rho12_three_site_uniform(j, b, t)?;
                three.0 = three.0.max(ed3.max_abs_diff(&closed));
                let c3 = concurrence(&ed3).with_context(at)?.concurrence;
                three.1 = three.1.max((c3 - concurrence_three_site(j, b, t)?).abs());
            }
        }
    }
    let mut table = Table::new(&["rho_max_deviation", "concurrence_max_deviation"]);
    header(&mut table, "calibrate");
    table
        .meta("grid_J", format!("{CAL_J:?}"))
        .meta("grid_B", format!("{CAL_B:?}"))
        .meta("grid_T", format!("{CAL_T:?}"))
        .meta("limit", CALIBRATION_LIMIT)
        .meta(
            "row 1",
            format!("two sites, b_n = {TWO_SITE_FIELD_PER_SITE} * B"),
        )
        .meta(
            "row 2",
            format!("three sites, b_n = {THREE_SITE_FIELD_PER_SITE} * B, pair 1,2"),
        );
    table.push(vec![two.0.into(), two.1.into()]);
    table.push(vec![three.0.into(), three.1.into()]);
    let ok = [two.0, two.1, three.0, three.1]
        .iter()
        .all(|&d| d <= CALIBRATION_LIMIT);
    Ok((table, ok))
}

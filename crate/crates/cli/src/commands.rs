use std::collections::BTreeMap;
use std::path::Path;

use anyhow::Context;
use rayon::prelude::*;
use serde::Serialize;

use nonclass::dqc1::{dqc1_scan, Dqc1Row};
use nonclass::linalg::eigenvalues_hermitian;
use nonclass::locking::{
    locking_lnu_bound, locking_mid, locking_mid_closed, locking_state, mub_family,
};
use nonclass::measures::{discord, lnu_distance, mid, mutual_information};
use nonclass::states::{
    dqc1, haar_unitary_seeded, horodecki_2x4, isotropic, random_density_seeded,
    zero_discord_example,
};
use nonclass::{DensityOperator, MeasureReport, Side};

use crate::error::CliError;
use crate::statefile::StateFile;
use crate::table::{Cell, Table};
use crate::{GenKind, GlobalOpts, MeasureKind};

/// `0, 1/steps, …, 1`.
pub fn unit_grid(steps: usize) -> Vec<f64> {
    let steps = steps.max(1);
    (0..=steps).map(|i| i as f64 / steps as f64).collect()
}

fn meta<const N: usize>(pairs: [(&str, String); N]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

pub fn build_state(
    g: &GlobalOpts,
    kind: &GenKind,
) -> Result<(DensityOperator, BTreeMap<String, String>), CliError> {
    Ok(match *kind {
        GenKind::Isotropic { z } => (
            isotropic(z)?,
            meta([("generator", "isotropic".into()), ("z", z.to_string())]),
        ),
        GenKind::Dqc1 { n, alpha } => {
            if n == 0 || n > 10 {
                return Err(anyhow::anyhow!("n = {n} is outside [1, 10]").into());
            }
            let st = dqc1(n, alpha, haar_unitary_seeded(1 << n, g.seed)?)?;
            let tau = st.tau();
            let m = meta([
                ("generator", "dqc1".into()),
                ("n", n.to_string()),
                ("alpha", alpha.to_string()),
                ("seed", g.seed.to_string()),
                ("unitary", "haar".into()),
                ("tau_re", tau.re.to_string()),
                ("tau_im", tau.im.to_string()),
            ]);
            (st.density().clone(), m)
        }
        GenKind::Horodecki { p } => (
            horodecki_2x4(p)?,
            meta([("generator", "horodecki".into()), ("p", p.to_string())]),
        ),
        GenKind::Locking { d, m } => {
            let st = locking_state(&mub_family(d, m)?);
            (
                st.density().clone(),
                meta([
                    ("generator", "locking".into()),
                    ("d", d.to_string()),
                    ("m", m.to_string()),
                ]),
            )
        }
        GenKind::ZeroDiscord { gamma, delta } => (
            zero_discord_example(gamma, delta),
            meta([
                ("generator", "zero-discord".into()),
                ("gamma", gamma.to_string()),
                ("delta", delta.to_string()),
            ]),
        ),
        GenKind::Random { dim_a, dim_b, rank } => {
            let rank = rank.unwrap_or(dim_a * dim_b);
            (
                random_density_seeded(dim_a, dim_b, rank, g.seed)?,
                meta([
                    ("generator", "random".into()),
                    ("dim_a", dim_a.to_string()),
                    ("dim_b", dim_b.to_string()),
                    ("rank", rank.to_string()),
                    ("seed", g.seed.to_string()),
                ]),
            )
        }
    })
}

pub fn generate(g: &GlobalOpts, kind: &GenKind, out: Option<&Path>) -> Result<(), CliError> {
    let (rho, metadata) = build_state(g, kind)?;
    let mut text = StateFile::from_state(&rho, metadata).to_json();
    text.push('\n');
    match out {
        Some(p) => {
            std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display()))?
        }
        None => print!("{text}"),
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct MeasureOutput {
    measure: &'static str,
    side: Option<&'static str>,
    value: f64,
    restarts: usize,
    residual: f64,
    dispersion: f64,
    evaluations: usize,
}

impl MeasureOutput {
    fn exact(measure: &'static str, value: f64) -> Self {
        Self {
            measure,
            side: None,
            value,
            restarts: 0,
            residual: 0.0,
            dispersion: 0.0,
            evaluations: 0,
        }
    }

    fn optimized(measure: &'static str, side: Side, r: &MeasureReport) -> Self {
        Self {
            measure,
            side: Some(side_name(side)),
            value: r.value,
            restarts: r.restarts,
            residual: r.residual,
            dispersion: r.dispersion,
            evaluations: r.evaluations,
        }
    }

    fn render_text(&self) -> String {
        let mut s = format!("measure={}\n", self.measure);
        if let Some(side) = self.side {
            s += &format!("side={side}\n");
        }
        s += &format!(
            "value={:.6}\nrestarts={}\nresidual={:.3e}\ndispersion={:.3e}\nevaluations={}\n",
            self.value, self.restarts, self.residual, self.dispersion, self.evaluations
        );
        s
    }
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::A => "a",
        Side::B => "b",
    }
}

pub fn measure(
    g: &GlobalOpts,
    input: &Path,
    kind: MeasureKind,
    side: Side,
) -> Result<(), CliError> {
    let rho = StateFile::read(input)?.to_state()?;
    let cfg = g.optimizer();
    let out = match kind {
        MeasureKind::Lnu => MeasureOutput::optimized("lnu", side, &lnu_distance(&rho, side, &cfg)),
        MeasureKind::Discord => {
            MeasureOutput::optimized("discord", side, &discord(&rho, side, &cfg))
        }
        MeasureKind::Mid => MeasureOutput::exact("mid", mid(&rho)),
        MeasureKind::MutualInfo => MeasureOutput::exact("mutual-info", mutual_information(&rho)),
        MeasureKind::Purity => MeasureOutput::exact("purity", rho.purity()),
        MeasureKind::Ppt => {
            // Smallest eigenvalue of the partial transpose; negative means NPT.
            let min = eigenvalues_hermitian(&rho.partial_transpose(side))
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            MeasureOutput {
                side: Some(side_name(side)),
                ..MeasureOutput::exact("ppt", min)
            }
        }
    };
    if g.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&out).map_err(anyhow::Error::from)?
        );
    } else {
        print!("{}", out.render_text());
    }
    if out.residual > g.tol {
        return Err(CliError::NonConvergence(format!(
            "residual {:.3e} exceeds tolerance {:.3e}",
            out.residual, g.tol
        )));
    }
    Ok(())
}

pub fn fig_horodecki(g: &GlobalOpts, grid: &[f64], out: Option<&Path>) -> Result<(), CliError> {
    let cfg = g.optimizer();
    let rows: Vec<(f64, f64, f64)> = grid
        .par_iter()
        .enumerate()
        .map(|(k, &p)| {
            let rho = horodecki_2x4(p)?;
            let d = discord(&rho, Side::A, &cfg.for_point(k as u64)).value;
            Ok((p, mid(&rho), d))
        })
        .collect::<nonclass::Result<_>>()?;
    let mut table = Table::new(vec!["p", "mid", "discord"]);
    for (p, m, d) in rows {
        table.push(vec![Cell::Num(p), Cell::Num(m), Cell::Num(d)]);
    }
    table.emit(out)?;
    Ok(())
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, count) = values
        .filter(|v| !v.is_nan())
        .fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    if count == 0 {
        f64::NAN
    } else {
        sum / count as f64
    }
}

pub fn fig_dqc1(
    g: &GlobalOpts,
    n: usize,
    alphas: &[f64],
    seeds: &[u64],
    per_seed: bool,
    out: Option<&Path>,
) -> Result<(), CliError> {
    if seeds.is_empty() {
        return Err(anyhow::anyhow!("at least one seed is required").into());
    }
    let rows = dqc1_scan(n, alphas, seeds, &g.optimizer())?;
    let table = if per_seed {
        let mut t = Table::new(vec![
            "alpha",
            "seed",
            "tau_re",
            "tau_im",
            "mid_closed",
            "mid_numeric",
            "mid_asymptotic",
            "discord_numeric",
            "lnu_closed",
        ]);
        for r in &rows {
            t.push(vec![
                Cell::Num(r.alpha),
                Cell::Int(r.seed),
                Cell::Num(r.tau.re),
                Cell::Num(r.tau.im),
                Cell::Num(r.mid_closed),
                Cell::Num(r.mid_numeric),
                Cell::Num(r.mid_asymptotic),
                Cell::Num(r.discord),
                Cell::Num(r.lnu_closed),
            ]);
        }
        t
    } else {
        let mut t = Table::new(vec![
            "alpha",
            "mid_numeric",
            "mid_asymptotic",
            "discord_numeric",
            "lnu_closed",
        ]);
        // Rows come back alpha-major, one chunk per alpha.
        for chunk in rows.chunks(seeds.len()) {
            let avg = |f: fn(&Dqc1Row) -> f64| mean(chunk.iter().map(f));
            t.push(vec![
                Cell::Num(chunk[0].alpha),
                Cell::Num(avg(|r| r.mid_numeric)),
                Cell::Num(avg(|r| r.mid_asymptotic)),
                Cell::Num(avg(|r| r.discord)),
                Cell::Num(avg(|r| r.lnu_closed)),
            ]);
        }
        t
    };
    table.emit(out)?;
    Ok(())
}

fn parse_pair(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Other(anyhow::anyhow!("bad pair {s:?}, expected DxM such as 4x2"));
    let (d, m) = s.trim().split_once(['x', 'X']).ok_or_else(bad)?;
    Ok((
        d.trim().parse().map_err(|_| bad())?,
        m.trim().parse().map_err(|_| bad())?,
    ))
}

pub fn locking_scan(pairs: &[String], strict: bool, out: Option<&Path>) -> Result<(), CliError> {
    let pairs: Vec<(usize, usize)> = pairs
        .iter()
        .map(|s| parse_pair(s))
        .collect::<Result<_, _>>()?;
    let rows: Vec<Result<[f64; 3], String>> = pairs
        .par_iter()
        .map(|&(d, m)| match mub_family(d, m) {
            Ok(family) => {
                let st = locking_state(&family);
                Ok([
                    locking_mid(&st),
                    locking_mid_closed(d, m),
                    locking_lnu_bound(&st),
                ])
            }
            Err(e) => Err(e.to_string()),
        })
        .collect();

    let mut table = Table::new(vec![
        "d",
        "m",
        "mid_numeric",
        "mid_closed",
        "lnu_bound",
        "status",
    ]);
    let mut unsupported = Vec::new();
    for (&(d, m), row) in pairs.iter().zip(&rows) {
        let (values, status) = match row {
            Ok(v) => (*v, "ok".to_string()),
            Err(msg) => {
                eprintln!("warning: ({d}, {m}): {msg}");
                unsupported.push(format!("{d}x{m}"));
                ([f64::NAN; 3], "unsupported".to_string())
            }
        };
        table.push(vec![
            Cell::Int(d as u64),
            Cell::Int(m as u64),
            Cell::Num(values[0]),
            Cell::Num(values[1]),
            Cell::Num(values[2]),
            Cell::Text(status),
        ]);
    }
    table.emit(out)?;
    if strict && !unsupported.is_empty() {
        return Err(CliError::Unsupported(format!(
            "pairs {}",
            unsupported.join(", ")
        )));
    }
    Ok(())
}

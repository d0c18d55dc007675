use std::f64::consts::PI;

use frobenius_core::circle_measures::{
    max_interval_gap, pushforward_to_interval, serre_density, Density, Support,
};
use frobenius_core::kloosterman::{
    b_necessary_check, closed_form_moments, kloosterman_curve, KloostermanConfig,
    KloostermanFamily, ScanReport,
};
use frobenius_core::legendre::{doubling_schedule, LegendreFamily, WORK_CEILING};
use frobenius_core::local_data::{epsilon_x, limit_denominator};
use frobenius_core::repthy::{
    nilpotent_kernel_ratio, trace_ratio_decay, weight_sequence, weyl_dim, NilpotentType,
    UnitarySSClass,
};
use frobenius_core::{Error, FieldConfig, MomentSequence, Result, SignConvention};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::manifest::{Outputs, RunRequest};

/// Nodes used when comparing a pushed-forward density against the Serre
/// density.
const IDENTIFICATION_NODES: usize = 1000;

fn complex_pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn moments_json(m: &MomentSequence) -> Vec<[f64; 2]> {
    m.values().iter().copied().map(complex_pair).collect()
}

pub fn legendre_moments(
    request: &RunRequest,
    p: u32,
    n_max: u32,
    i_max: u64,
    ceiling: u64,
) -> Result<Outputs> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("--n-max must be at least 1".into()));
    }
    let config = FieldConfig {
        max_order: ceiling,
        table_bound: ceiling,
    };
    let family = LegendreFamily::with_limits(p, config, WORK_CEILING)?;
    let schedule = doubling_schedule(i_max)?;
    let reports = (1..=n_max)
        .map(|n| family.moment_experiment(n, &schedule))
        .collect::<Result<Vec<_>>>()?;

    let digest = request.digest();
    let mut out = Outputs::default();
    let rows = reports.iter().flat_map(|r| {
        r.rows.iter().map(|row| {
            vec![
                row.n.to_string(),
                row.i.to_string(),
                row.value_printed.to_string(),
                row.value_lefschetz.to_string(),
                row.target.to_string(),
                row.abs_error.to_string(),
            ]
        })
    });
    out.push_csv(
        "legendre_moments.csv",
        &digest,
        &["n", "i", "value_printed", "value_lefschetz", "target_lefschetz", "abs_error"],
        rows,
    )?;
    let summary: Vec<Value> = reports
        .iter()
        .map(|r| {
            let last = r.rows.last().expect("nonempty schedule");
            json!({
                "n": r.n,
                "scalar_fibers": r.scalar_fibers,
                "final_i": last.i,
                "final_value_lefschetz": last.value_lefschetz,
                "final_value_printed": last.value_printed,
                "target_lefschetz": r.target_lefschetz,
                "target_printed": r.target_printed,
                "prose_value": r.prose_value,
                "printed_sign_preferred": r.printed_sign_preferred,
                "sign_discrepancy": r.sign_discrepancy,
                "factor_discrepancy": r.factor_discrepancy,
            })
        })
        .collect();
    out.push_json(
        "legendre_moments.json",
        &digest,
        json!({ "p": p, "schedule": schedule, "reports": summary }),
    )?;
    Ok(out)
}

pub fn legendre_charpoly(request: &RunRequest, p: u32, i_list: &[u32], ceiling: u64) -> Result<Outputs> {
    if i_list.is_empty() {
        return Err(Error::InvalidArgument("--i-list is empty".into()));
    }
    let config = FieldConfig {
        max_order: ceiling,
        table_bound: ceiling,
    };
    let family = LegendreFamily::with_limits(p, config, WORK_CEILING)?;
    let results = i_list
        .iter()
        .map(|&i| family.h1_charpoly(i).map(|c| c.to_json()))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Outputs::default();
    out.push_json(
        "legendre_charpoly.json",
        &request.digest(),
        json!({ "p": p, "results": results }),
    )?;
    Ok(out)
}

/// `"1,1x40"` into direction `[1, 1]` and count 40.
pub fn parse_weights(s: &str) -> Result<(Vec<u32>, u32)> {
    let bad = || Error::InvalidArgument(format!("--weights {s:?} is not of the form DIRxCOUNT"));
    let (dir, count) = s.rsplit_once('x').ok_or_else(bad)?;
    let direction = parse_list::<u32>(dir).map_err(|_| bad())?;
    let count = count.trim().parse::<u32>().map_err(|_| bad())?;
    if direction.is_empty() || count == 0 {
        return Err(bad());
    }
    Ok((direction, count))
}

pub fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("cannot parse {t:?} in {s:?}")))
        })
        .collect()
}

fn scan_json(r: &ScanReport) -> Value {
    json!({
        "n": r.n,
        "points": r.points,
        "min_discriminant": r.min_discriminant,
        "max_drift": r.max_drift,
        "violations": r.violations,
    })
}

#[allow(clippy::too_many_arguments)]
pub fn kloosterman(
    request: &RunRequest,
    p: u32,
    big_n: u32,
    n_max: u32,
    weights: &str,
    b: u32,
    ceiling: u64,
) -> Result<Outputs> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("--n-max must be at least 1".into()));
    }
    let cfg = KloostermanConfig::new(p, big_n)?;
    let (direction, count) = parse_weights(weights)?;
    let seq = weight_sequence(big_n as usize, &direction, count)?;
    let family = KloostermanFamily::with_ceiling(cfg, ceiling);

    let scans = (1..=n_max)
        .map(|n| family.regular_ss_scan(n))
        .collect::<Result<Vec<_>>>()?;
    let classes = family.all_classes(1)?;
    let decay = family.u_part_decay(1, &seq, 0.05)?;
    let moments = closed_form_moments(&cfg, b, n_max as usize)?;
    let check = b_necessary_check(&cfg);
    let curve = kloosterman_curve(&cfg);
    let denom = limit_denominator(&curve)?;
    let eps_inf = epsilon_x(&curve.boundary[1])?;
    let fit = moments.printed.decay_fit().expect("closed form carries its decay");

    let digest = request.digest();
    let mut out = Outputs::default();
    out.push_csv(
        "kloosterman_decay.csv",
        &digest,
        &["i", "value", "running_min"],
        decay
            .rows
            .iter()
            .zip(&decay.running_min)
            .map(|((i, v), m)| vec![i.to_string(), v.to_string(), m.to_string()]),
    )?;
    out.push_csv(
        "kloosterman_classes.csv",
        &digest,
        &["n", "point", "trace_re", "trace_im", "discriminant_abs", "drift"],
        classes.iter().map(|c| {
            vec![
                c.n.to_string(),
                c.point.0.to_string(),
                c.power_sums[0].re.to_string(),
                c.power_sums[0].im.to_string(),
                c.discriminant_abs.to_string(),
                c.drift.to_string(),
            ]
        }),
    )?;
    let violations: Vec<Value> = scans
        .iter()
        .flat_map(|s| s.violations.iter().map(move |v| json!([s.n, v.0, v.1])))
        .collect();
    let report = json!({
        "config": {
            "p": cfg.p,
            "N": cfg.big_n,
            "a_param": cfg.a_param,
            "ceiling": ceiling,
        },
        "scan": {
            "min_discriminant": scans.iter().map(|s| s.min_discriminant).fold(f64::INFINITY, f64::min),
            "violations": violations,
            "per_degree": scans.iter().map(scan_json).collect::<Vec<_>>(),
        },
        "decay": decay.rows,
        "decay_summary": {
            "n": decay.n,
            "direction": direction,
            "tolerance": decay.tolerance,
            "passed": decay.passed,
            "final_running_min": decay.running_min.last(),
        },
        "moments": {
            "b": moments.b,
            "printed": moments_json(&moments.printed),
            "lefschetz": moments_json(&moments.lefschetz),
            "decay_c": fit.c,
            "decay_alpha": fit.alpha,
        },
        "b_check": check,
        "boundary": {
            "epsilon_infinity": eps_inf.to_string(),
            "limit_denominator": denom,
        },
    });
    out.push_json("kloosterman.json", &digest, report)?;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Family {
    Serre,
    Printed,
    Corrected,
}

pub fn measure(request: &RunRequest, q: f64, family: Family, samples: usize) -> Result<Outputs> {
    if samples == 0 {
        return Err(Error::InvalidArgument("--samples must be at least 1".into()));
    }
    let serre = serre_density(q)?;
    let density = match family {
        Family::Serre => serre.clone(),
        Family::Printed => Density::plancherel(q, SignConvention::Printed)?,
        Family::Corrected => Density::plancherel(q, SignConvention::Lefschetz)?,
    };
    let on_interval = match density.support() {
        Support::Interval => density.clone(),
        Support::Circle => pushforward_to_interval(&density)?,
    };

    let digest = request.digest();
    let comment = format!("manifest={digest}");
    let mut out = Outputs::default();
    let mut bytes = Vec::new();
    density.write_csv(&mut bytes, samples, Some(&comment))?;
    out.push("measure_density.csv", bytes);
    if density.support() == Support::Circle {
        let mut bytes = Vec::new();
        on_interval.write_csv(&mut bytes, samples, Some(&comment))?;
        out.push("measure_pushforward.csv", bytes);
    }
    let cdf = on_interval.cdf_grid(samples);
    out.push_csv(
        "measure_cdf.csv",
        &digest,
        &["x", "cdf"],
        cdf.iter().enumerate().map(|(k, v)| {
            let x = -2.0 + 4.0 * k as f64 / samples as f64;
            vec![x.to_string(), v.to_string()]
        }),
    )?;

    let (gap, at) = max_interval_gap(&on_interval, &serre, IDENTIFICATION_NODES);
    let json = json!({
        "family": format!("{family:?}").to_lowercase(),
        "q": q,
        "samples": samples,
        "kind": density.name(),
        "params": density.params(),
        "support": density.support(),
        "total_mass": density.total_mass(),
        "interval_moments": {
            "2": on_interval.moment(2).re,
            "4": on_interval.moment(4).re,
        },
        "identification": {
            "nodes": IDENTIFICATION_NODES,
            "max_gap_vs_serre": gap,
            "at_x": at,
        },
    });
    out.push_json("measure.json", &digest, json)?;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Group {
    Sl2,
    Sl3,
}

impl Group {
    pub fn rank(self) -> usize {
        match self {
            Group::Sl2 => 2,
            Group::Sl3 => 3,
        }
    }

    fn default_direction(self) -> Vec<u32> {
        vec![1; self.rank() - 1]
    }

    /// `θ = π/2` for `SL_2`; a regular class with well separated
    /// eigenvalues for `SL_3`.
    fn default_angles(self) -> Vec<f64> {
        match self {
            Group::Sl2 => vec![PI / 2.0],
            Group::Sl3 => vec![0.0, 2.0 * PI / 3.0 + 0.3],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum AsymptoticTest {
    TraceRatio,
    NilpotentKernel,
}

pub fn asymptotics(
    request: &RunRequest,
    group: Group,
    test: AsymptoticTest,
    steps: u32,
    direction: Option<Vec<u32>>,
    angles: Option<Vec<f64>>,
    tolerance: f64,
) -> Result<Outputs> {
    let direction = direction.unwrap_or_else(|| group.default_direction());
    let seq = weight_sequence(group.rank(), &direction, steps)?;
    let (report, class) = match test {
        AsymptoticTest::TraceRatio => {
            let angles = angles.unwrap_or_else(|| group.default_angles());
            let g = UnitarySSClass::from_angles(&angles)?;
            if g.rank() != group.rank() {
                return Err(Error::InvalidArgument(format!(
                    "{} angles given for SL_{}",
                    angles.len(),
                    group.rank()
                )));
            }
            (trace_ratio_decay(&seq, &g, tolerance)?, Some(angles))
        }
        AsymptoticTest::NilpotentKernel => {
            (nilpotent_kernel_ratio(&seq, NilpotentType::Principal, tolerance)?, None)
        }
    };
    let strictly_decreasing = report.ratios.windows(2).all(|w| w[1] < w[0]);

    let digest = request.digest();
    let mut out = Outputs::default();
    out.push_csv(
        "asymptotics.csv",
        &digest,
        &["step", "weight", "dimension", "ratio"],
        seq.iter().zip(&report.ratios).enumerate().map(|(k, (w, r))| {
            let coords: Vec<String> = w.coords().iter().map(u32::to_string).collect();
            vec![
                (k + 1).to_string(),
                coords.join(" "),
                weyl_dim(w).to_string(),
                r.to_string(),
            ]
        }),
    )?;
    out.push_json(
        "asymptotics.json",
        &digest,
        json!({
            "group": format!("{group:?}").to_lowercase(),
            "test": match test {
                AsymptoticTest::TraceRatio => "trace-ratio",
                AsymptoticTest::NilpotentKernel => "nilpotent-kernel",
            },
            "direction": direction,
            "class_angles": class,
            "ratios": report.ratios,
            "tolerance": report.tolerance,
            "passed": report.passed,
            "strictly_decreasing": strictly_decreasing,
        }),
    )?;
    Ok(out)
}

//! CSV tables. Floats use the shortest representation that parses back to
//! the same `f64`.

use crate::stochastic::lifetime::LifetimeSeries;
use crate::sweep::{LifetimeCurve, SweepResult, WorkingPoint};

pub const MAP_HEADER: &str = "x_label,y_label,value_db";
pub const MAP_LINEAR_HEADER: &str = "x_label,y_label,variance";
pub const SERIES_HEADER: &str = "t_seconds,variance,db";
pub const SERIES_MC_HEADER: &str = "t_seconds,variance,stderr,analytic";
pub const POINTS_HEADER: &str = "label,kappa,epsilon,eta,rho,xi_computed,db_computed,xi_paper,abs_dev";

/// Shortest round-trip text for `x`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn table<I>(header: &str, rows: I) -> String
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn map_table(result: &SweepResult, header: &str, values: &[f64]) -> String {
    let ny = result.y_values.len();
    table(
        header,
        values.iter().enumerate().map(|(k, &v)| {
            vec![
                fmt_f64(result.x_values[k / ny]),
                fmt_f64(result.y_values[k % ny]),
                fmt_f64(v),
            ]
        }),
    )
}

/// Long-format squeezing map in dB, x outer.
pub fn map_csv(result: &SweepResult) -> String {
    map_table(result, MAP_HEADER, &result.values_db)
}

/// Same grid as [`map_csv`] with the minimal variance instead of dB.
pub fn map_linear_csv(result: &SweepResult) -> String {
    map_table(result, MAP_LINEAR_HEADER, &result.values_linear)
}

/// Curves concatenated; each restarts at t = 0.
pub fn series_csv(curves: &[LifetimeCurve]) -> String {
    table(
        SERIES_HEADER,
        curves.iter().flat_map(|c| {
            c.times
                .iter()
                .zip(&c.variance)
                .zip(&c.db)
                .map(|((t, v), d)| vec![fmt_f64(*t), fmt_f64(*v), fmt_f64(*d)])
        }),
    )
}

pub fn series_mc_csv(series: &LifetimeSeries, analytic: &[f64]) -> String {
    table(
        SERIES_MC_HEADER,
        (0..series.times.len()).map(|i| {
            vec![
                fmt_f64(series.times[i]),
                fmt_f64(series.variance[i]),
                fmt_f64(series.stderr[i]),
                fmt_f64(analytic[i]),
            ]
        }),
    )
}

pub fn points_csv(points: &[WorkingPoint]) -> String {
    table(
        POINTS_HEADER,
        points.iter().map(|p| {
            vec![
                p.label.to_string(),
                fmt_f64(p.spec.kappa),
                fmt_f64(p.spec.epsilon),
                fmt_f64(p.spec.eta),
                fmt_f64(p.spec.rho),
                fmt_f64(p.xi_computed),
                fmt_f64(p.db_computed),
                fmt_f64(p.xi_quoted),
                fmt_f64(p.abs_dev),
            ]
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::{squeezing_map, working_points, SweepAxis, SweepGrid};

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 6.02e23, -0.0, 2.5] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }

    #[test]
    fn map_layout() {
        let mut grid = SweepGrid::default();
        grid.x = SweepAxis::linear(grid.x.kind, 0.0, 1.0, 3);
        grid.y = SweepAxis::linear(grid.y.kind, 0.1, 0.2, 2);
        let r = squeezing_map(&grid).unwrap();
        let text = map_csv(&r);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], MAP_HEADER);
        assert_eq!(lines.len(), 7);
        assert!(lines[2].starts_with("0.0,0.2,"));
        assert!(lines[3].starts_with("0.5,0.1,"));
    }

    #[test]
    fn points_rows() {
        let text = points_csv(&working_points());
        assert_eq!(text.lines().count(), 4);
        assert!(text.lines().nth(1).unwrap().starts_with("he3_k_headline,"));
    }
}

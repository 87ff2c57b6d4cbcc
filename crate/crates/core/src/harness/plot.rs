//! Gnuplot-ready data files for the fitted curves of a record.

use super::record::{num, Curve};

/// One output file: name relative to the run directory, and contents.
pub type PlotFile = (String, String);

/// Two-column data, fitted line, script stub and (when points were dropped)
/// an exclusion sidecar for every non-empty curve. Empty curves are skipped
/// with a note in the returned list of skipped names.
pub fn plot_files(curves: &[Curve]) -> (Vec<PlotFile>, Vec<String>) {
    let mut files = Vec::new();
    let mut skipped = Vec::new();
    for c in curves {
        if c.points.is_empty() {
            log::info!("curve `{}` has no points; no plot data written", c.name);
            skipped.push(c.name.clone());
            continue;
        }
        let mut dat = format!("# {}\t{}\n", c.x_label, c.y_label);
        for [x, y] in &c.points {
            dat.push_str(&format!("{}\t{}\n", num(*x), num(*y)));
        }
        files.push((format!("{}.dat", c.name), dat));

        let mut script = format!(
            "set xlabel '{}'\nset ylabel '{}'\nplot '{}.dat' using 1:2 with points title '{}'",
            c.x_label, c.y_label, c.name, c.name
        );
        if let (Some(s), Some(b)) = (c.slope, c.intercept) {
            let lo = c.points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
            let hi = c.points.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
            let fit = format!(
                "# slope={} intercept={} residual_rms={}\n{}\t{}\n{}\t{}\n",
                num(s),
                num(b),
                num(c.residual_rms.unwrap_or(f64::NAN)),
                num(lo),
                num(b + s * lo),
                num(hi),
                num(b + s * hi)
            );
            files.push((format!("{}.fit.dat", c.name), fit));
            script.push_str(&format!(", '{}.fit.dat' using 1:2 with lines title 'slope {:.4}'", c.name, s));
        }
        script.push('\n');
        files.push((format!("{}.gp", c.name), script));

        if !c.excluded.is_empty() {
            let mut side = String::from("# points excluded from the fit\nx\treason\n");
            for e in &c.excluded {
                side.push_str(&format!("{}\t{}\n", num(e.x), e.reason));
            }
            files.push((format!("{}.excluded.txt", c.name), side));
        }
    }
    (files, skipped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::record::Excluded;

    #[test]
    fn fitted_curve_with_exclusion() {
        let mut c = Curve::new("inc", "log N", "log dE");
        c.points = vec![[1.0, 2.0], [2.0, 0.0]];
        c.slope = Some(-2.0);
        c.intercept = Some(4.0);
        c.residual_rms = Some(0.0);
        c.excluded.push(Excluded { x: 32.0, reason: "below floor".into() });
        let (files, skipped) = plot_files(&[c, Curve::new("empty", "x", "y")]);
        assert_eq!(skipped, vec!["empty".to_string()]);
        let names: Vec<&str> = files.iter().map(|f| f.0.as_str()).collect();
        assert_eq!(names, ["inc.dat", "inc.fit.dat", "inc.gp", "inc.excluded.txt"]);
        assert_eq!(files[0].1, "# log N\tlog dE\n1\t2\n2\t0\n");
        assert!(files[1].1.ends_with("1\t2\n2\t0\n"));
        assert!(files[3].1.contains("32\tbelow floor"));
    }
}

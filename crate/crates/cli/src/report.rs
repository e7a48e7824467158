//! Report tables: long-format metric rows and histogram CSVs.

use anyhow::Result;

use saccade_lab::metrics::{FixationClass, Histogram, PerClass, Summary};

pub const METRIC_HEADER: [&str; 5] = ["experiment", "class", "statistic", "value", "n"];

#[derive(Debug, Default)]
pub struct MetricTable {
    rows: Vec<[String; 5]>,
}

impl MetricTable {
    pub fn push(
        &mut self,
        experiment: &str,
        class: &str,
        statistic: &str,
        value: Option<f64>,
        n: usize,
    ) {
        self.rows.push([
            experiment.to_string(),
            class.to_string(),
            statistic.to_string(),
            value.map(|v| v.to_string()).unwrap_or_default(),
            n.to_string(),
        ]);
    }

    /// Mean and SEM rows for each fixation class.
    pub fn push_per_class(&mut self, experiment: &str, statistic: &str, stats: &PerClass<Summary>) {
        for class in FixationClass::ALL {
            let s = stats.get(class);
            self.push(
                experiment,
                class.as_str(),
                &format!("{statistic}_mean"),
                s.mean,
                s.n,
            );
            self.push(
                experiment,
                class.as_str(),
                &format!("{statistic}_sem"),
                s.sem,
                s.n,
            );
        }
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(METRIC_HEADER)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        Ok(w.into_inner()?)
    }
}

pub fn histogram_csv(histogram: &Histogram) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["bin_left", "bin_right", "probability"])?;
    let edges = histogram.bin_edges();
    for (i, p) in histogram.probabilities().iter().enumerate() {
        w.write_record([
            edges[i].to_string(),
            edges[i + 1].to_string(),
            p.to_string(),
        ])?;
    }
    Ok(w.into_inner()?)
}

/// Pools summaries by recomputing from the raw values.
pub fn collect_per_class(parts: &[PerClass<Vec<f64>>]) -> PerClass<Vec<f64>> {
    let mut out: PerClass<Vec<f64>> = PerClass::default();
    for p in parts {
        for class in FixationClass::ALL {
            out.get_mut(class).extend_from_slice(p.get(class));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_values_are_blank() {
        let mut t = MetricTable::default();
        t.push("e,1", "all", "x", None, 0);
        t.push("e", "all", "y", Some(0.5), 3);
        let text = String::from_utf8(t.to_csv().unwrap()).unwrap();
        assert_eq!(
            text,
            "experiment,class,statistic,value,n\n\"e,1\",all,x,,0\ne,all,y,0.5,3\n"
        );
    }

    #[test]
    fn histogram_rows() {
        let mut h = Histogram::integer(2);
        h.add(1.0, 1.0);
        let text = String::from_utf8(histogram_csv(&h).unwrap()).unwrap();
        assert_eq!(text, "bin_left,bin_right,probability\n0,1,0\n1,2,1\n");
    }
}

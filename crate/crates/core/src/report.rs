//! Text and JSON rendering of the aggregation tables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::{json, Value};

use crate::harness::{
    aggregate_best_config, aggregate_max_success, aggregate_min_epochs, aggregate_success,
    aggregate_times, comparison_report, HarnessError, MapKey, RunRecord,
};

const DASH: &str = "—";

/// Footnote printed under the comparison table.
pub const COMPARISON_NOTE: &str = "Note: the published GA column reports a movement count \
whose definition is not stated; for map1 with one UAV it exceeds the 48-epoch optimum. \
Our column is mean ± sample sd of best epochs over covered runs. The RL column is quoted \
from the earlier reinforcement-learning planner and is not recomputed.";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum TableId {
    Success,
    MaxSuccess,
    BestConfig,
    MinEpochs,
    Times,
    Comparison,
    All,
}

impl TableId {
    pub const EACH: [TableId; 6] = [
        TableId::Success,
        TableId::MaxSuccess,
        TableId::BestConfig,
        TableId::MinEpochs,
        TableId::Times,
        TableId::Comparison,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TableId::Success => "success",
            TableId::MaxSuccess => "max-success",
            TableId::BestConfig => "best-config",
            TableId::MinEpochs => "min-epochs",
            TableId::Times => "times",
            TableId::Comparison => "comparison",
            TableId::All => "all",
        }
    }

    fn expand(self) -> Vec<TableId> {
        match self {
            TableId::All => Self::EACH.to_vec(),
            t => vec![t],
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Formats a mean with two decimals, dropping one trailing zero
/// (`48.0`, `16.3`, `16.32`).
pub fn fmt_mean(x: f64) -> String {
    let s = format!("{x:.2}");
    match s.strip_suffix('0') {
        Some(t) => t.to_string(),
        None => s,
    }
}

/// A titled table of strings, aligned on output.
#[derive(Debug, Clone, PartialEq)]
pub struct TextTable {
    pub title: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub note: Option<String>,
}

impl fmt::Display for TextTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ncols = self.headers.len();
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        writeln!(f, "{}", self.title)?;
        let line = |cells: &[String]| {
            let mut s = String::new();
            for (i, cell) in cells.iter().enumerate().take(ncols) {
                let pad = widths[i] - cell.chars().count();
                if i > 0 {
                    s.push_str("  ");
                }
                // First column left-aligned, the rest right-aligned.
                if i == 0 {
                    s.push_str(cell);
                    s.extend(std::iter::repeat_n(' ', pad));
                } else {
                    s.extend(std::iter::repeat_n(' ', pad));
                    s.push_str(cell);
                }
            }
            s.trim_end().to_string()
        };
        writeln!(f, "{}", line(&self.headers))?;
        let rule: usize = widths.iter().sum::<usize>() + 2 * ncols.saturating_sub(1);
        writeln!(f, "{}", "-".repeat(rule))?;
        for row in &self.rows {
            writeln!(f, "{}", line(row))?;
        }
        if let Some(note) = &self.note {
            writeln!(f, "{note}")?;
        }
        Ok(())
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or(DASH.to_string(), |x| x.to_string())
}

/// Lays out per-(map, uavs) values as a map × UAV-count matrix.
fn matrix<T>(title: &str, cells: &BTreeMap<MapKey, T>, show: impl Fn(&T) -> String) -> TextTable {
    let uavs: BTreeSet<usize> = cells.keys().map(|k| k.uavs).collect();
    let maps: BTreeSet<&str> = cells.keys().map(|k| k.map_id.as_str()).collect();
    let mut headers = vec!["map".to_string()];
    headers.extend(uavs.iter().map(|n| format!("{n} UAV")));
    let rows = maps
        .iter()
        .map(|&m| {
            let mut row = vec![m.to_string()];
            for &n in &uavs {
                let key = MapKey {
                    map_id: m.to_string(),
                    uavs: n,
                };
                row.push(cells.get(&key).map_or(String::new(), &show));
            }
            row
        })
        .collect();
    TextTable {
        title: title.into(),
        headers,
        rows,
        note: None,
    }
}

fn headers(h: &[&str]) -> Vec<String> {
    h.iter().map(|s| s.to_string()).collect()
}

/// Builds the aligned text form of one table.
pub fn text_table(records: &[RunRecord], table: TableId) -> Result<TextTable, HarnessError> {
    Ok(match table {
        TableId::Success => TextTable {
            title: "Coverage success per GA configuration".into(),
            headers: headers(&["map", "uavs", "pop", "gens", "covered", "runs", "success"]),
            rows: aggregate_success(records)?
                .into_iter()
                .map(|(k, c)| {
                    vec![
                        k.map_id,
                        k.uavs.to_string(),
                        k.population_size.to_string(),
                        k.generations.to_string(),
                        c.covered.to_string(),
                        c.total.to_string(),
                        format!("{}%", c.display_percent()),
                    ]
                })
                .collect(),
            note: None,
        },
        TableId::MaxSuccess => matrix(
            "Maximum coverage success over GA configurations",
            &aggregate_max_success(records)?,
            |c| format!("{}%", c.display_percent()),
        ),
        TableId::BestConfig => TextTable {
            title: "Best configuration (lowest mean epochs over covered runs)".into(),
            headers: headers(&["map", "uavs", "mean", "pop", "gens"]),
            rows: aggregate_best_config(records)?
                .into_iter()
                .map(|(k, b)| {
                    let mut row = vec![k.map_id, k.uavs.to_string()];
                    match b {
                        Some(b) => row.extend([
                            fmt_mean(b.mean_epochs),
                            b.population_size.to_string(),
                            b.generations.to_string(),
                        ]),
                        None => row.extend([DASH.into(), DASH.into(), DASH.into()]),
                    }
                    row
                })
                .collect(),
            note: None,
        },
        TableId::MinEpochs => matrix(
            "Minimum epochs over covered runs",
            &aggregate_min_epochs(records)?,
            |e| opt(*e),
        ),
        TableId::Times => TextTable {
            title: "Wall time of covered runs (seconds)".into(),
            headers: headers(&["map", "uavs", "min", "max"]),
            rows: aggregate_times(records)?
                .into_iter()
                .map(|(k, t)| {
                    let mut row = vec![k.map_id, k.uavs.to_string()];
                    match t {
                        Some(t) => row.extend([format!("{:.2}", t.min), format!("{:.2}", t.max)]),
                        None => row.extend([DASH.into(), DASH.into()]),
                    }
                    row
                })
                .collect(),
            note: None,
        },
        TableId::Comparison => TextTable {
            title: "Comparison with published results".into(),
            headers: headers(&["map", "uavs", "ours", "published GA", "RL"]),
            rows: comparison_report(records)?
                .into_iter()
                .map(|r| {
                    let pm = |m: f64, s: f64| format!("{} ± {:.2}", fmt_mean(m), s);
                    let pub2 = |m: f64, s: f64| format!("{m:.2} ± {s:.2}");
                    vec![
                        r.map_id,
                        r.uavs.to_string(),
                        r.ours.map_or(DASH.into(), |o| pm(o.mean, o.sd)),
                        r.published_ga.map_or(DASH.into(), |p| pub2(p.mean, p.sd)),
                        r.rl.map_or(DASH.into(), |p| pub2(p.mean, p.sd)),
                    ]
                })
                .collect(),
            note: Some(COMPARISON_NOTE.into()),
        },
        TableId::All => unreachable!("expanded by callers"),
    })
}

/// Machine-readable form of one table.
pub fn json_table(records: &[RunRecord], table: TableId) -> Result<Value, HarnessError> {
    let map_key = |k: &MapKey| json!({"map": k.map_id, "uavs": k.uavs});
    let rows: Vec<Value> = match table {
        TableId::Success => aggregate_success(records)?
            .into_iter()
            .map(|(k, c)| {
                json!({
                    "map": k.map_id, "uavs": k.uavs,
                    "population_size": k.population_size, "generations": k.generations,
                    "covered": c.covered, "runs": c.total, "percent": c.percent(),
                })
            })
            .collect(),
        TableId::MaxSuccess => aggregate_max_success(records)?
            .iter()
            .map(|(k, c)| {
                let mut v = map_key(k);
                v["covered"] = json!(c.covered);
                v["runs"] = json!(c.total);
                v["percent"] = json!(c.percent());
                v
            })
            .collect(),
        TableId::BestConfig => aggregate_best_config(records)?
            .iter()
            .map(|(k, b)| {
                let mut v = map_key(k);
                v["best"] = json!(b);
                v
            })
            .collect(),
        TableId::MinEpochs => aggregate_min_epochs(records)?
            .iter()
            .map(|(k, e)| {
                let mut v = map_key(k);
                v["min_epochs"] = json!(e);
                v
            })
            .collect(),
        TableId::Times => aggregate_times(records)?
            .iter()
            .map(|(k, t)| {
                let mut v = map_key(k);
                v["wall_time_seconds"] = json!(t);
                v
            })
            .collect(),
        TableId::Comparison => comparison_report(records)?
            .into_iter()
            .map(|r| json!(r))
            .collect(),
        TableId::All => unreachable!("expanded by callers"),
    };
    Ok(json!({"table": table.name(), "rows": rows}))
}

/// All requested tables as text, separated by blank lines.
pub fn render_text(records: &[RunRecord], table: TableId) -> Result<String, HarnessError> {
    let parts = table
        .expand()
        .into_iter()
        .map(|t| text_table(records, t).map(|t| t.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(parts.join("\n"))
}

/// All requested tables as one JSON document.
pub fn render_json(records: &[RunRecord], table: TableId) -> Result<Value, HarnessError> {
    let tables = table
        .expand()
        .into_iter()
        .map(|t| json_table(records, t))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(json!({"tables": tables}))
}

//! Edge lists, reports and distribution exports.

pub mod edge_list;
pub mod loglog;
pub mod report;

pub use edge_list::{load_edge_list, read_edge_list, write_edge_list, write_edge_list_to, EdgeFormat, LoadedGraph};
pub use loglog::{loglog_from_histogram, loglog_from_values, write_series_csv, LogLogSeries};
pub use report::{compare, comparison_text, fmt_g6, report_text, ComparisonReport, Metric, ObjectiveWeights};

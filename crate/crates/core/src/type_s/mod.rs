//! Gel'fand–Shilov type seminorm diagnostics and weight-sequence checks.

pub mod fit;
pub mod seminorm;
pub mod sequence;
pub mod surface;

pub use fit::{fit_growth, GrowthFit};
pub use seminorm::{closed_form_transform, growth_trend, seminorm_table, seminorm_tables, ChirpSign, GrowthTrend, SeminormTable};
pub use sequence::{check_sequence, superadditive_log_bound, SequenceFamily, SequenceReport, SumTrend};
pub use surface::{seminorm_table_2d, SeminormTable2D};

//! Compositional statistics around the regression: diary clustering,
//! covariate correlation and selection, two-group validation tests and
//! ternary coordinates.

pub mod correlation;
pub mod kmeans;
pub mod select;
pub mod ternary;
pub mod validation;

pub use correlation::{correlation_matrix, pearson, CorrelationMatrix};
pub use kmeans::{encode_diary, kmeans, ClusterResult, DayState, ReductionMap};
pub use select::{select_variables, Selection, SelectionStep};
pub use ternary::{ternary_coordinates, ternary_inverse, TernaryPoint};
pub use validation::{
    boxs_m_test, category_trajectories, t_test_per_component, validate_trajectories, welch_t_test, BoxM, TTestResult,
    TestReport,
};

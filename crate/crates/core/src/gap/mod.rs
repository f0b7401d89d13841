//! The expectation gap `Δ = E|X-Y| + E|X'-Y'| - E|X-X'| - E|Y-Y'|` of one
//! symbol's counts: exact enumeration, the characteristic-function integral,
//! closed-form lower bounds, and the inequalities behind them.

pub mod bounds;
pub mod cf;
pub mod claim;
pub mod exact;
pub mod pmf;
pub mod quadrature;
pub mod section4;
pub mod zolotarev;

pub use bounds::{lower_bound_binomial, lower_bound_poisson, BoundConstants, GapBound, Regime};
pub use cf::{cf_binomial, cf_poisson, cf_polar_binomial, CfPolar};
pub use claim::{claim_inequality_check, ClaimCheck};
pub use exact::{exact_gap_binomial, exact_gap_poisson};
pub use quadrature::{PanelRule, QuadratureConfig};
pub use section4::{closed_form_floor, csum_inequality_check, section4_gap_bound, Section4Gap, SymbolSet};
pub use zolotarev::{zolotarev_abs_mean, zolotarev_gap};

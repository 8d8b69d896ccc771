//! Closed-form versus symbol-walk equivalence checking.

use beamsweep::ssb::{SlotFilter, SsbCase, SsbGrid};
use beamsweep::sweep::{self, SweepRequest};
use beamsweep::tdd::{PatternVariant, TddPattern};
use beamsweep::Error;

/// First disagreement between the two sweep-time computations.
#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub case: SsbCase,
    pub pattern: PatternVariant,
    pub filter: SlotFilter,
    pub n_req: u32,
    pub closed_symbols: u64,
    pub oracle_symbols: u64,
    /// Segment capacities of the grid, for diagnosing the allocation.
    pub segment_capacities: Vec<u32>,
}

impl std::fmt::Display for Mismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "case {} pattern {:?} filter {:?} n_req {}: closed form {} symbols, symbol walk {} symbols (segments {:?})",
            self.case.label(),
            self.pattern,
            self.filter,
            self.n_req,
            self.closed_symbols,
            self.oracle_symbols,
            self.segment_capacities,
        )
    }
}

pub fn all_configurations() -> Vec<(SsbCase, TddPattern, SlotFilter)> {
    let mut out = Vec::new();
    for case in SsbCase::ALL {
        for pattern in [TddPattern::a(), TddPattern::b()] {
            for filter in [SlotFilter::DlOnly, SlotFilter::DlAndSpecial] {
                out.push((case, pattern, filter));
            }
        }
    }
    out
}

/// Check a caller-supplied sweep-symbol computation against the symbol
/// walk for every configuration and `n_req` up to `n_req_max`. Returns
/// the number of comparisons on success, or the first mismatch.
pub fn check_equivalence_with<F>(closed_symbols: F, n_req_max: u32) -> Result<u64, Box<Mismatch>>
where
    F: Fn(&SweepRequest) -> Result<u64, Error>,
{
    let mut checks = 0u64;
    for (case, pattern, filter) in all_configurations() {
        let grid = SsbGrid::effective(case, pattern, filter).expect("published grids are non-empty");
        for n_req in 1..=n_req_max {
            let req = SweepRequest::new(&grid, n_req, 20).expect("valid request");
            let closed = closed_symbols(&req).expect("closed form on a uniform grid");
            let walked = sweep::oracle(&req).sweep_symbols();
            checks += 1;
            if closed != walked {
                return Err(Box::new(Mismatch {
                    case,
                    pattern: pattern.variant(),
                    filter,
                    n_req,
                    closed_symbols: closed,
                    oracle_symbols: walked,
                    segment_capacities: grid.segments().iter().map(|s| s.capacity).collect(),
                }));
            }
        }
    }
    Ok(checks)
}

/// Check the built-in closed form, comparing full timing structures.
pub fn check_equivalence(n_req_max: u32) -> Result<u64, Box<Mismatch>> {
    // Field-by-field equality first; the symbol comparison below feeds
    // the mismatch report.
    for (case, pattern, filter) in all_configurations() {
        let grid = SsbGrid::effective(case, pattern, filter).expect("published grids are non-empty");
        for n_req in 1..=n_req_max {
            let req = SweepRequest::new(&grid, n_req, 20).expect("valid request");
            let cf = sweep::closed_form(&req).expect("uniform grid");
            let or = sweep::oracle(&req);
            if cf != or {
                return Err(Box::new(Mismatch {
                    case,
                    pattern: pattern.variant(),
                    filter,
                    n_req,
                    closed_symbols: cf.sweep_symbols(),
                    oracle_symbols: or.sweep_symbols(),
                    segment_capacities: grid.segments().iter().map(|s| s.capacity).collect(),
                }));
            }
        }
    }
    check_equivalence_with(|req| sweep::closed_form(req).map(|t| t.sweep_symbols()), n_req_max)
}

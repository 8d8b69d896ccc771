//! Beam-sweep duration over SS burst sets.
//!
//! A sweep transmits `n_ssb_req = n_beam_bs * n_beam_ue` SSBs in grid
//! order, filling whole SS burst sets first and a residual set last.
//! Two independent computations of the total sweep time are provided:
//!
//! - [`closed_form`] works on the burst-segment decomposition alone
//!   (capacities, gaps, slot parity constants), mirroring the cumulative
//!   capacity and indicator-function formulation of the segment model;
//! - [`oracle`] walks the raw effective start-symbol list and reads the
//!   answer off the final SSB position.
//!
//! Both count integer symbols and must agree bit-exactly on every grid.
//! The residual time ends with the slot that carries the final SSB when
//! that SSB is the slot's last block, and with the final SSB's last
//! symbol otherwise; complete sets contribute one full SS burst
//! periodicity each.

use crate::ssb::{SsbGrid, SSB_SYMBOLS};
use crate::tdd::Numerology;
use crate::Error;

/// Standardized SS burst set periodicities in ms.
pub const ALLOWED_TAU_SS_MS: [u32; 6] = [5, 10, 20, 40, 80, 160];

/// A request to sweep a number of SSBs over a grid at a periodicity.
#[derive(Debug, Clone, Copy)]
pub struct SweepRequest<'a> {
    grid: &'a SsbGrid,
    n_ssb_req: u32,
    tau_ss_ms: u32,
}

impl<'a> SweepRequest<'a> {
    pub fn new(grid: &'a SsbGrid, n_ssb_req: u32, tau_ss_ms: u32) -> Result<Self, Error> {
        if n_ssb_req == 0 {
            return Err(Error::EmptySweepRequest);
        }
        if !ALLOWED_TAU_SS_MS.contains(&tau_ss_ms) {
            return Err(Error::BurstPeriodicity(tau_ss_ms));
        }
        Ok(Self {
            grid,
            n_ssb_req,
            tau_ss_ms,
        })
    }

    /// Request covering every BS/UE beam-direction combination.
    pub fn from_beam_counts(
        grid: &'a SsbGrid,
        n_beam_bs: u32,
        n_beam_ue: u32,
        tau_ss_ms: u32,
    ) -> Result<Self, Error> {
        if n_beam_bs == 0 || n_beam_ue == 0 {
            return Err(Error::ZeroBeams);
        }
        let n_ssb_req = n_beam_bs.checked_mul(n_beam_ue).ok_or(Error::BeamProductOverflow {
            bs: n_beam_bs,
            ue: n_beam_ue,
        })?;
        Self::new(grid, n_ssb_req, tau_ss_ms)
    }

    pub fn n_ssb_req(self) -> u32 {
        self.n_ssb_req
    }

    pub fn tau_ss_ms(self) -> u32 {
        self.tau_ss_ms
    }

    pub fn grid(self) -> &'a SsbGrid {
        self.grid
    }
}

/// Sweep timing decomposition, held in integer symbol counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepTiming {
    numerology: Numerology,
    tau_ss_ms: u32,
    n_complete_sets: u32,
    residual_ssbs: u32,
    residual_symbols: u64,
    n_sweep_sets: u32,
}

impl SweepTiming {
    fn assemble(
        numerology: Numerology,
        tau_ss_ms: u32,
        n_complete_sets: u32,
        residual_ssbs: u32,
        residual_symbols: u64,
    ) -> Self {
        let set_symbols = u64::from(tau_ss_ms) * u64::from(numerology.symbols_per_ms());
        let total = u64::from(n_complete_sets) * set_symbols + residual_symbols;
        let n_sweep_sets = (total.div_ceil(set_symbols)) as u32;
        Self {
            numerology,
            tau_ss_ms,
            n_complete_sets,
            residual_ssbs,
            residual_symbols,
            n_sweep_sets,
        }
    }

    pub fn numerology(self) -> Numerology {
        self.numerology
    }

    pub fn tau_ss_ms(self) -> u32 {
        self.tau_ss_ms
    }

    /// Fully occupied SS burst sets before the final one.
    pub fn n_complete_sets(self) -> u32 {
        self.n_complete_sets
    }

    /// SSBs allocated in the final (possibly partial) burst set.
    pub fn residual_ssbs(self) -> u32 {
        self.residual_ssbs
    }

    /// Symbols spanned by the residual allocation, from the burst-set
    /// start.
    pub fn residual_symbols(self) -> u64 {
        self.residual_symbols
    }

    /// Symbols contributed by complete sets (one periodicity each).
    pub fn complete_symbols(self) -> u64 {
        u64::from(self.n_complete_sets)
            * u64::from(self.tau_ss_ms)
            * u64::from(self.numerology.symbols_per_ms())
    }

    /// Total sweep span in symbols.
    pub fn sweep_symbols(self) -> u64 {
        self.complete_symbols() + self.residual_symbols
    }

    /// Burst sets needed to complete the sweep.
    pub fn n_sweep_sets(self) -> u32 {
        self.n_sweep_sets
    }

    /// Sweep periodicity: total sweep time rounded up to a whole number
    /// of burst-set periods. Always an integer number of ms.
    pub fn tau_sweep_ms(self) -> u32 {
        self.n_sweep_sets * self.tau_ss_ms
    }

    pub fn t_sweep_c_ms(self) -> f64 {
        f64::from(self.n_complete_sets) * f64::from(self.tau_ss_ms)
    }

    pub fn t_sweep_r_ms(self) -> f64 {
        self.numerology.symbols_to_ms(self.residual_symbols)
    }

    pub fn t_sweep_ms(self) -> f64 {
        self.numerology.symbols_to_ms(self.sweep_symbols())
    }
}

/// Closed-form sweep time from the burst-segment decomposition.
///
/// Complete sets contribute `n_c = ceil(n_req / C) - 1` periodicities
/// with `C` the total capacity per set. The residual `n_r = n_req -
/// n_c * C` SSBs fill segments sequentially, `r(n) = min(c(n), max(0,
/// n_r - C(n-1)))` each; filled segments count their slots plus trailing
/// gap, and the last allocated segment counts whole slots when its final
/// block closes a slot, or the partial slot up to the block's last
/// symbol otherwise (slot-parity start constants for case D).
pub fn closed_form(req: &SweepRequest) -> Result<SweepTiming, Error> {
    let grid = req.grid;
    if !grid.is_uniform() {
        return Err(Error::NonUniformGrid);
    }
    let num = grid.numerology();
    let per_slot = u32::from(grid.ssb_per_slot());
    let symbols_per_slot = u64::from(Numerology::SYMBOLS_PER_SLOT);

    let capacity_total = grid.l_eff();
    let n_complete = (req.n_ssb_req - 1) / capacity_total;
    let n_residual = req.n_ssb_req - n_complete * capacity_total;

    let mut residual_symbols = 0u64;
    let mut allocated = 0u32; // C(n-1): capacity of segments already filled
    for seg in grid.segments() {
        let remaining = n_residual - allocated;
        let r = seg.capacity.min(remaining);
        debug_assert!(r > 0, "sequential allocation never visits empty segments");
        if r < seg.capacity || allocated + r == n_residual {
            // Last segment holding residual blocks.
            let full_slots = u64::from(r / per_slot);
            if r % per_slot == 0 {
                residual_symbols += full_slots * symbols_per_slot;
            } else {
                let last_slot = u64::from(seg.first_slot) + full_slots;
                let first_start = grid.case().within_slot_starts(last_slot)[0];
                residual_symbols += full_slots * symbols_per_slot + u64::from(first_start + SSB_SYMBOLS);
            }
            break;
        }
        // Filled segment: all its slots plus the trailing gap.
        residual_symbols += (u64::from(seg.capacity / per_slot) + u64::from(seg.gap_slots)) * symbols_per_slot;
        allocated += seg.capacity;
    }

    Ok(SweepTiming::assemble(
        num,
        req.tau_ss_ms,
        n_complete,
        n_residual,
        residual_symbols,
    ))
}

/// Brute-force sweep time: walk the effective start-symbol list.
///
/// SSB `i` (1-based) lands in burst set `(i - 1) / l_eff` at within-set
/// position `(i - 1) % l_eff`; the residual span is read directly off
/// the final SSB's start symbol. Shares no code path with
/// [`closed_form`].
pub fn oracle(req: &SweepRequest) -> SweepTiming {
    let grid = req.grid;
    let starts = grid.start_symbols();
    let l_eff = grid.l_eff();

    let n_complete = (req.n_ssb_req - 1) / l_eff;
    let last_pos = ((req.n_ssb_req - 1) % l_eff) as usize;
    let n_residual = last_pos as u32 + 1;

    let last_start = starts[last_pos];
    let last_slot = last_start / Numerology::SYMBOLS_PER_SLOT;
    let slot_has_later_block = starts
        .get(last_pos + 1)
        .is_some_and(|&s| s / Numerology::SYMBOLS_PER_SLOT == last_slot);
    let residual_symbols = if slot_has_later_block {
        u64::from(last_start + SSB_SYMBOLS)
    } else {
        u64::from(last_slot + 1) * u64::from(Numerology::SYMBOLS_PER_SLOT)
    };

    SweepTiming::assemble(
        grid.numerology(),
        req.tau_ss_ms,
        n_complete,
        n_residual,
        residual_symbols,
    )
}

/// Round a sweep duration up to the next whole number of burst-set
/// periods. Returns `(tau_sweep_ms, n_sweep_sets)`.
pub fn sweep_period(t_sweep_ms: f64, tau_ss_ms: u32) -> (u32, u32) {
    assert!(t_sweep_ms > 0.0, "sweep duration must be positive");
    let n = (t_sweep_ms / f64::from(tau_ss_ms)).ceil() as u32;
    (n * tau_ss_ms, n)
}

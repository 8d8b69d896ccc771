//! SSB start-symbol sets and their interaction with the TDD grid.
//!
//! Candidate SS/PBCH block positions follow TS 38.213 for the 120 kHz
//! (case D), 480 kHz (case F) and 960 kHz (case G) subcarrier spacings.
//! The frame-structure-agnostic sets are filtered against a harmonized
//! TDD pattern to obtain the effective set actually transmittable, which
//! is then decomposed into burst segments (maximal runs of consecutive
//! SSB-carrying slots) and the gaps between them.

use crate::tdd::{Numerology, SlotRole, TddPattern};
use crate::Error;

/// Symbols occupied by one SS/PBCH block.
pub const SSB_SYMBOLS: u32 = 4;

/// SS burst set window, fixed to the first half of a 10 ms radio frame.
pub const BURST_WINDOW_MS: u32 = 5;

/// Candidate SSB pattern case, tied to its subcarrier spacing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SsbCase {
    /// 120 kHz (mu = 3), starts {4, 8, 16, 20} + 28 n.
    D,
    /// 480 kHz (mu = 5), starts {2, 9} + 14 n.
    F,
    /// 960 kHz (mu = 6), starts {2, 9} + 14 n.
    G,
}

impl SsbCase {
    pub const ALL: [SsbCase; 3] = [SsbCase::D, SsbCase::F, SsbCase::G];

    pub fn numerology(self) -> Numerology {
        let mu = match self {
            SsbCase::D => 3,
            SsbCase::F => 5,
            SsbCase::G => 6,
        };
        Numerology::new(mu).expect("case numerologies are in range")
    }

    pub fn label(self) -> &'static str {
        match self {
            SsbCase::D => "D",
            SsbCase::F => "F",
            SsbCase::G => "G",
        }
    }

    /// Frame-structure-agnostic start symbols, relative to the first
    /// symbol of the half-frame. Always 64 candidates.
    pub fn agnostic_start_symbols(self) -> Vec<u32> {
        match self {
            SsbCase::D => {
                let blocks = (0u32..=3).chain(5..=8).chain(10..=13).chain(15..=18);
                blocks
                    .flat_map(|n| [4, 8, 16, 20].into_iter().map(move |o| o + 28 * n))
                    .collect()
            }
            SsbCase::F | SsbCase::G => (0u32..=31)
                .flat_map(|n| [2, 9].into_iter().map(move |o| o + 14 * n))
                .collect(),
        }
    }

    /// Within-slot start symbols by slot-index parity.
    ///
    /// Case D alternates: even slots carry starts {4, 8}, odd slots
    /// {2, 6}. Cases F and G carry {2, 9} in every SSB slot.
    pub fn within_slot_starts(self, slot_index: u64) -> [u32; 2] {
        match self {
            SsbCase::D => {
                if slot_index.is_multiple_of(2) {
                    [4, 8]
                } else {
                    [2, 6]
                }
            }
            SsbCase::F | SsbCase::G => [2, 9],
        }
    }
}

/// Which slot roles may carry SSBs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SlotFilter {
    /// DL slots only.
    DlOnly,
    /// DL slots plus the special (flexible) slot.
    DlAndSpecial,
}

/// How an SSB is admitted into a special slot under `DlAndSpecial`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SpecialAdmission {
    /// Admit by slot role alone; the published effective counts follow
    /// this rule.
    #[default]
    ByRole,
    /// Additionally require all four SSB symbols to fall inside the DL
    /// portion of the special-slot split.
    WithinDlSymbols,
}

/// One maximal run of consecutive SSB-carrying slots plus the gap that
/// follows it (up to the next run, or to the end of the burst window).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BurstSegment {
    /// First slot of the run, relative to the half-frame start.
    pub first_slot: u32,
    /// Last slot of the run (inclusive).
    pub last_slot: u32,
    /// SSBs carried by the run.
    pub capacity: u32,
    /// Non-SSB slots between this run and the next (or the window end).
    pub gap_slots: u32,
}

/// Effective SSB grid: ordered start symbols surviving the TDD filter,
/// with their burst-segment decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct SsbGrid {
    case: SsbCase,
    start_symbols: Vec<u32>,
    segments: Vec<BurstSegment>,
    ssb_per_slot: u8,
    window_slots: u32,
    uniform: bool,
}

impl SsbGrid {
    /// Build the effective grid for a case under a TDD pattern and slot
    /// filter, with role-based special-slot admission and two SSBs per
    /// slot.
    pub fn effective(case: SsbCase, pattern: TddPattern, filter: SlotFilter) -> Result<Self, Error> {
        Self::effective_with(case, pattern, filter, SpecialAdmission::default(), 2)
    }

    /// Build the effective grid with explicit admission rule and SSBs
    /// per slot (1 or 2).
    pub fn effective_with(
        case: SsbCase,
        pattern: TddPattern,
        filter: SlotFilter,
        admission: SpecialAdmission,
        ssb_per_slot: u8,
    ) -> Result<Self, Error> {
        if !(1..=2).contains(&ssb_per_slot) {
            return Err(Error::SsbPerSlot(ssb_per_slot));
        }
        let num = case.numerology();
        let split_dl = u32::from(pattern.special_split().dl_symbols);

        let admit = |start: u32| -> bool {
            // Every occupied symbol must land in a permitted slot.
            (start..start + SSB_SYMBOLS).all(|sym| {
                let slot = u64::from(sym / Numerology::SYMBOLS_PER_SLOT);
                match pattern.slot_role(num, slot) {
                    SlotRole::Dl => true,
                    SlotRole::Special => match (filter, admission) {
                        (SlotFilter::DlOnly, _) => false,
                        (SlotFilter::DlAndSpecial, SpecialAdmission::ByRole) => true,
                        (SlotFilter::DlAndSpecial, SpecialAdmission::WithinDlSymbols) => {
                            sym % Numerology::SYMBOLS_PER_SLOT < split_dl
                        }
                    },
                    SlotRole::Ul => false,
                }
            })
        };

        let mut kept: Vec<u32> = case
            .agnostic_start_symbols()
            .into_iter()
            .filter(|&s| admit(s))
            .collect();

        if ssb_per_slot == 1 {
            // Keep only the first admitted start in each slot.
            let mut last_slot = None;
            kept.retain(|&s| {
                let slot = s / Numerology::SYMBOLS_PER_SLOT;
                if last_slot == Some(slot) {
                    false
                } else {
                    last_slot = Some(slot);
                    true
                }
            });
        }

        if kept.is_empty() {
            return Err(Error::EmptyGrid);
        }

        let window_slots = BURST_WINDOW_MS * num.slots_per_ms();
        let segments = segment_slots(&kept, window_slots);
        let uniform = per_slot_counts(&kept)
            .iter()
            .all(|&(_, count)| count == u32::from(ssb_per_slot));

        Ok(Self {
            case,
            start_symbols: kept,
            segments,
            ssb_per_slot,
            window_slots,
            uniform,
        })
    }

    pub fn case(&self) -> SsbCase {
        self.case
    }

    pub fn numerology(&self) -> Numerology {
        self.case.numerology()
    }

    /// Effective number of SSBs per SS burst set.
    pub fn l_eff(&self) -> u32 {
        self.start_symbols.len() as u32
    }

    /// Ordered effective start symbols.
    pub fn start_symbols(&self) -> &[u32] {
        &self.start_symbols
    }

    /// Burst segments in slot order.
    pub fn segments(&self) -> &[BurstSegment] {
        &self.segments
    }

    pub fn ssb_per_slot(&self) -> u8 {
        self.ssb_per_slot
    }

    /// SS burst window length in slots (5 ms at the case numerology).
    pub fn window_slots(&self) -> u32 {
        self.window_slots
    }

    /// Whether every SSB-carrying slot holds exactly `ssb_per_slot`
    /// blocks. The segment closed form requires this.
    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    /// Cumulative capacity through segment `n` (1-based); `C(0) = 0`.
    pub fn cumulative_capacity(&self, n: usize) -> u32 {
        self.segments.iter().take(n).map(|s| s.capacity).sum()
    }
}

fn per_slot_counts(starts: &[u32]) -> Vec<(u32, u32)> {
    let mut counts: Vec<(u32, u32)> = Vec::new();
    for &s in starts {
        let slot = s / Numerology::SYMBOLS_PER_SLOT;
        match counts.last_mut() {
            Some((last, n)) if *last == slot => *n += 1,
            _ => counts.push((slot, 1)),
        }
    }
    counts
}

fn segment_slots(starts: &[u32], window_slots: u32) -> Vec<BurstSegment> {
    let slots = per_slot_counts(starts);
    let mut segments: Vec<BurstSegment> = Vec::new();
    for (slot, count) in slots {
        match segments.last_mut() {
            Some(seg) if seg.last_slot + 1 == slot => {
                seg.last_slot = slot;
                seg.capacity += count;
            }
            _ => segments.push(BurstSegment {
                first_slot: slot,
                last_slot: slot,
                capacity: count,
                gap_slots: 0,
            }),
        }
    }
    // Trailing gaps: to the next segment, or to the window end.
    for i in 0..segments.len() {
        let next_start = if i + 1 < segments.len() {
            segments[i + 1].first_slot
        } else {
            window_slots
        };
        segments[i].gap_slots = next_start - segments[i].last_slot - 1;
    }
    segments
}

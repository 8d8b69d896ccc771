//! Harmonized TDD frame structures for NR FR2-and-beyond numerologies.
//!
//! Two CEPT-harmonized repeating slot layouts are modelled: pattern (a)
//! with a 2.5 ms period and pattern (b) with a 5 ms period. Both scale
//! proportionally with the numerology so that DL, special and UL slots
//! stay aligned across subcarrier spacings, keeping exactly one special
//! slot per period.

use crate::Error;

/// Subcarrier-spacing index `mu` with 14-symbol slots.
///
/// The subcarrier spacing is `15 * 2^mu` kHz and the slot duration is
/// `1 / 2^mu` ms. Only `mu = 1..=6` is supported (30 kHz through
/// 960 kHz); FR1 15 kHz has no harmonized pattern here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Numerology {
    mu: u8,
}

impl Numerology {
    /// OFDM symbols per slot with normal cyclic prefix.
    pub const SYMBOLS_PER_SLOT: u32 = 14;

    pub fn new(mu: u8) -> Result<Self, Error> {
        if (1..=6).contains(&mu) {
            Ok(Self { mu })
        } else {
            Err(Error::NumerologyRange(mu))
        }
    }

    pub fn mu(self) -> u8 {
        self.mu
    }

    /// Subcarrier spacing in kHz: `15 * 2^mu`.
    pub fn scs_khz(self) -> u32 {
        15 << self.mu
    }

    /// Slots per millisecond: `2^mu`. Exact by construction.
    pub fn slots_per_ms(self) -> u32 {
        1 << self.mu
    }

    /// Symbols per millisecond: `14 * 2^mu`. Exact by construction.
    pub fn symbols_per_ms(self) -> u32 {
        Self::SYMBOLS_PER_SLOT << self.mu
    }

    /// Slot duration in ms. Presentation only; internal arithmetic uses
    /// integer symbol counts.
    pub fn slot_duration_ms(self) -> f64 {
        1.0 / self.slots_per_ms() as f64
    }

    /// Convert an integer symbol count at this numerology to ms.
    pub fn symbols_to_ms(self, symbols: u64) -> f64 {
        symbols as f64 / self.symbols_per_ms() as f64
    }
}

/// Role of one slot within the repeating TDD period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SlotRole {
    Dl,
    Special,
    Ul,
}

/// DL:GP:UL symbol split of the special slot. Always fills 14 symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpecialSplit {
    pub dl_symbols: u8,
    pub gp_symbols: u8,
    pub ul_symbols: u8,
}

impl SpecialSplit {
    pub fn new(dl: u8, gp: u8, ul: u8) -> Result<Self, Error> {
        if u32::from(dl) + u32::from(gp) + u32::from(ul) == Numerology::SYMBOLS_PER_SLOT {
            Ok(Self {
                dl_symbols: dl,
                gp_symbols: gp,
                ul_symbols: ul,
            })
        } else {
            Err(Error::SpecialSplit { dl, gp, ul })
        }
    }
}

/// Which of the two harmonized layouts a pattern follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PatternVariant {
    /// 2.5 ms period; `DDDSU` at 30 kHz, scaled proportionally above.
    A,
    /// 5 ms period; `DDDDDDDSUU` at 30 kHz, scaled proportionally above.
    B,
}

/// Per-period slot counts of a pattern at one numerology.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlotCounts {
    pub dl: u32,
    pub special: u32,
    pub ul: u32,
    pub total: u32,
}

/// A harmonized TDD pattern: layout variant plus special-slot split.
///
/// Pattern (a) fixes the split at 10:2:2. Pattern (b) defaults to 6:4:4
/// with 4:6:4 selectable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TddPattern {
    variant: PatternVariant,
    special: SpecialSplit,
}

impl TddPattern {
    /// Pattern (a): 2.5 ms period, special slot 10:2:2.
    pub fn a() -> Self {
        Self {
            variant: PatternVariant::A,
            special: SpecialSplit::new(10, 2, 2).expect("10+2+2 == 14"),
        }
    }

    /// Pattern (b) with the default 6:4:4 special slot.
    pub fn b() -> Self {
        Self {
            variant: PatternVariant::B,
            special: SpecialSplit::new(6, 4, 4).expect("6+4+4 == 14"),
        }
    }

    /// Pattern (b) with a caller-selected special slot split.
    pub fn b_with_split(split: SpecialSplit) -> Self {
        Self {
            variant: PatternVariant::B,
            special: split,
        }
    }

    pub fn variant(self) -> PatternVariant {
        self.variant
    }

    pub fn special_split(self) -> SpecialSplit {
        self.special
    }

    /// Period of the repeating layout in ms.
    pub fn period_ms(self) -> f64 {
        match self.variant {
            PatternVariant::A => 2.5,
            PatternVariant::B => 5.0,
        }
    }

    /// Period length in slots at `num`. Exact: 2.5 ms and 5 ms are whole
    /// slot counts for every supported numerology.
    pub fn period_slots(self, num: Numerology) -> u32 {
        match self.variant {
            // 2.5 * 2^mu = 5 * 2^(mu-1)
            PatternVariant::A => 5 << (num.mu() - 1),
            PatternVariant::B => 5 << num.mu(),
        }
    }

    /// DL, special and UL slot counts per period.
    ///
    /// Pattern (a): `2^(mu+1) - 1` DL slots, one special slot and
    /// `2^(mu-1)` UL slots. Pattern (b): `2^(mu+2) - 1` DL, one special,
    /// `2^mu` UL.
    pub fn slot_counts(self, num: Numerology) -> SlotCounts {
        let mu = num.mu();
        let (dl, ul) = match self.variant {
            PatternVariant::A => ((1u32 << (mu + 1)) - 1, 1u32 << (mu - 1)),
            PatternVariant::B => ((1u32 << (mu + 2)) - 1, 1u32 << mu),
        };
        let total = self.period_slots(num);
        debug_assert_eq!(dl + 1 + ul, total);
        SlotCounts {
            dl,
            special: 1,
            ul,
            total,
        }
    }

    /// Role of the slot at `slot_index`, wrapping past one period.
    ///
    /// The period lays out all DL slots first, then the single special
    /// slot, then the UL slots.
    pub fn slot_role(self, num: Numerology, slot_index: u64) -> SlotRole {
        let counts = self.slot_counts(num);
        let idx = (slot_index % u64::from(counts.total)) as u32;
        if idx < counts.dl {
            SlotRole::Dl
        } else if idx == counts.dl {
            SlotRole::Special
        } else {
            SlotRole::Ul
        }
    }

    /// DL symbols available in one TDD period, optionally counting the
    /// DL portion of the special slot.
    pub fn dl_symbols_per_period(self, num: Numerology, include_special_dl: bool) -> u32 {
        let counts = self.slot_counts(num);
        let mut symbols = counts.dl * Numerology::SYMBOLS_PER_SLOT;
        if include_special_dl {
            symbols += u32::from(self.special.dl_symbols);
        }
        symbols
    }

    /// DL symbols available over the first `span_slots` slots of the
    /// pattern, counted exactly (whole periods plus a partial walk).
    pub fn dl_symbols_in_span(self, num: Numerology, span_slots: u64, include_special_dl: bool) -> u64 {
        let counts = self.slot_counts(num);
        let period = u64::from(counts.total);
        let full_periods = span_slots / period;
        let remainder = (span_slots % period) as u32;

        let mut symbols = full_periods * u64::from(self.dl_symbols_per_period(num, include_special_dl));
        symbols += u64::from(remainder.min(counts.dl) * Numerology::SYMBOLS_PER_SLOT);
        if include_special_dl && remainder > counts.dl {
            symbols += u64::from(self.special.dl_symbols);
        }
        symbols
    }
}

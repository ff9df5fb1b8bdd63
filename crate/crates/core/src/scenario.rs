use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which party a marginal or map refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Alice,
    Bob,
}

/// Shape of a bipartite experiment at a fixed preparation.
///
/// Tables over a scenario are stored in the canonical order:
/// lexicographic in (Alice setting, Bob setting, Alice outcome, Bob outcome),
/// everything indexed from zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scenario {
    pub n_settings_alice: usize,
    pub n_settings_bob: usize,
    pub n_outcomes_alice: usize,
    pub n_outcomes_bob: usize,
    pub preparation: String,
}

/// One entry of a table: settings `(a, b)` and outcomes `(x, y)` for Alice and Bob.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub a: usize,
    pub b: usize,
    pub x: usize,
    pub y: usize,
}

impl Scenario {
    pub fn new(
        n_settings_alice: usize,
        n_settings_bob: usize,
        n_outcomes_alice: usize,
        n_outcomes_bob: usize,
    ) -> Result<Self> {
        Self::with_preparation(n_settings_alice, n_settings_bob, n_outcomes_alice, n_outcomes_bob, "c")
    }

    pub fn with_preparation(
        n_settings_alice: usize,
        n_settings_bob: usize,
        n_outcomes_alice: usize,
        n_outcomes_bob: usize,
        preparation: impl Into<String>,
    ) -> Result<Self> {
        let s = Scenario {
            n_settings_alice,
            n_settings_bob,
            n_outcomes_alice,
            n_outcomes_bob,
            preparation: preparation.into(),
        };
        s.validate()?;
        Ok(s)
    }

    /// Two settings and two outcomes per side.
    pub fn chsh() -> Self {
        Self::new(2, 2, 2, 2).expect("valid")
    }

    pub fn validate(&self) -> Result<()> {
        let dims = [
            self.n_settings_alice,
            self.n_settings_bob,
            self.n_outcomes_alice,
            self.n_outcomes_bob,
        ];
        if dims.iter().any(|&d| d == 0) {
            return Err(Error::InvalidScenario(format!(
                "all cardinalities must be at least 1, got {dims:?}"
            )));
        }
        Ok(())
    }

    pub fn n_settings(&self, side: Side) -> usize {
        match side {
            Side::Alice => self.n_settings_alice,
            Side::Bob => self.n_settings_bob,
        }
    }

    pub fn n_outcomes(&self, side: Side) -> usize {
        match side {
            Side::Alice => self.n_outcomes_alice,
            Side::Bob => self.n_outcomes_bob,
        }
    }

    /// Joint-outcome cells per setting pair.
    pub fn block_len(&self) -> usize {
        self.n_outcomes_alice * self.n_outcomes_bob
    }

    pub fn n_blocks(&self) -> usize {
        self.n_settings_alice * self.n_settings_bob
    }

    pub fn n_cells(&self) -> usize {
        self.n_blocks() * self.block_len()
    }

    pub fn index(&self, cell: Cell) -> usize {
        ((cell.a * self.n_settings_bob + cell.b) * self.n_outcomes_alice + cell.x) * self.n_outcomes_bob
            + cell.y
    }

    pub fn cell(&self, index: usize) -> Cell {
        let y = index % self.n_outcomes_bob;
        let rest = index / self.n_outcomes_bob;
        let x = rest % self.n_outcomes_alice;
        let rest = rest / self.n_outcomes_alice;
        let b = rest % self.n_settings_bob;
        let a = rest / self.n_settings_bob;
        Cell { a, b, x, y }
    }

    /// Cells in canonical order.
    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.n_cells()).map(move |i| self.cell(i))
    }

    /// Setting pairs in canonical order.
    pub fn setting_pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        let nb = self.n_settings_bob;
        (0..self.n_settings_alice).flat_map(move |a| (0..nb).map(move |b| (a, b)))
    }

    /// Index range of the block of cells sharing settings `(a, b)`.
    pub fn block(&self, a: usize, b: usize) -> std::ops::Range<usize> {
        let start = (a * self.n_settings_bob + b) * self.block_len();
        start..start + self.block_len()
    }

    /// Same cardinalities; preparation labels may differ.
    pub fn same_shape(&self, other: &Scenario) -> bool {
        self.n_settings_alice == other.n_settings_alice
            && self.n_settings_bob == other.n_settings_bob
            && self.n_outcomes_alice == other.n_outcomes_alice
            && self.n_outcomes_bob == other.n_outcomes_bob
    }

    pub(crate) fn check_same(&self, other: &Scenario) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ScenarioMismatch(format!("{self} vs {other}")))
        }
    }
}

impl std::fmt::Display for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}-{}-{}-{} (c = {})",
            self.n_settings_alice, self.n_settings_bob, self.n_outcomes_alice, self.n_outcomes_bob, self.preparation
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_cardinality() {
        assert!(Scenario::new(0, 2, 2, 2).is_err());
        assert!(Scenario::new(2, 2, 2, 0).is_err());
    }

    #[test]
    fn canonical_order_is_lexicographic() {
        let s = Scenario::new(2, 3, 2, 3).unwrap();
        let cells: Vec<Cell> = s.cells().collect();
        assert_eq!(cells.len(), 2 * 3 * 2 * 3);
        let tuples: Vec<_> = cells.iter().map(|c| (c.a, c.b, c.x, c.y)).collect();
        let mut sorted = tuples.clone();
        sorted.sort();
        assert_eq!(tuples, sorted);
        for (i, c) in cells.iter().enumerate() {
            assert_eq!(s.index(*c), i);
        }
        assert_eq!(s.block(1, 2), 30..36);
    }
}

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar, DEFAULT_TOL};
use crate::scenario::{Cell, Scenario, Side};

/// Observable conditional frequency table `f(x, y | a, b)` at a fixed
/// preparation.
#[derive(Debug, Clone, PartialEq)]
pub struct Phenomenon<T> {
    scenario: Scenario,
    table: Vec<T>,
}

pub type ExactPhenomenon = Phenomenon<Rational>;
pub type FloatPhenomenon = Phenomenon<f64>;

impl<T: Scalar> Phenomenon<T> {
    /// Validates totality, range and per-setting normalization. Floating
    /// tables are checked at [`DEFAULT_TOL`].
    pub fn new(scenario: Scenario, table: Vec<T>) -> Result<Self> {
        scenario.validate()?;
        if table.len() != scenario.n_cells() {
            return Err(Error::InvalidScenario(format!(
                "table has {} cells, scenario {} needs {}",
                table.len(),
                scenario,
                scenario.n_cells()
            )));
        }
        check_table(&scenario, &table, "phenomenon")?;
        Ok(Phenomenon { scenario, table })
    }

    pub fn from_fn(scenario: Scenario, mut f: impl FnMut(Cell) -> T) -> Result<Self> {
        let table = scenario.cells().map(&mut f).collect();
        Self::new(scenario, table)
    }

    /// Uniform table `1 / (|X| |Y|)` in every block.
    pub fn uniform(scenario: Scenario) -> Self {
        let n = scenario.block_len() as i64;
        Self::from_fn(scenario, |_| T::from_ratio(1, n)).expect("uniform table is normalized")
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn table(&self) -> &[T] {
        &self.table
    }

    pub fn get(&self, cell: Cell) -> &T {
        &self.table[self.scenario.index(cell)]
    }

    pub fn prob(&self, a: usize, b: usize, x: usize, y: usize) -> &T {
        self.get(Cell { a, b, x, y })
    }

    /// Single-party marginal `f(x | a, b)` (Alice) or `f(y | a, b)` (Bob).
    pub fn marginal(&self, side: Side) -> Marginal<T> {
        marginal_of(&self.scenario, &self.table, side)
    }

    pub fn to_float(&self) -> FloatPhenomenon {
        Phenomenon {
            scenario: self.scenario.clone(),
            table: self.table.iter().map(Scalar::to_f64).collect(),
        }
    }

    /// Largest cellwise absolute difference, as a float.
    pub fn max_abs_diff(&self, other: &Phenomenon<T>) -> Result<f64> {
        self.scenario.check_same(&other.scenario)?;
        Ok(self
            .table
            .iter()
            .zip(&other.table)
            .map(|(p, q)| p.abs_diff(q).to_f64())
            .fold(0.0, f64::max))
    }

    /// Convex combination `Σ w_i f_i`; all parts must share a scenario.
    pub fn mixture(parts: &[(T, &Phenomenon<T>)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::Domain("empty mixture".into()))?
            .1;
        let mut table = vec![T::zero(); first.table.len()];
        for (w, p) in parts {
            first.scenario.check_same(&p.scenario)?;
            for (acc, v) in table.iter_mut().zip(&p.table) {
                *acc = acc.clone() + w.clone() * v.clone();
            }
        }
        Self::new(first.scenario.clone(), table)
    }

    pub(crate) fn from_parts_unchecked(scenario: Scenario, table: Vec<T>) -> Self {
        Phenomenon { scenario, table }
    }
}

impl ExactPhenomenon {
    /// Rationalizes every cell (continued fractions, denominator at most
    /// `max_denom`) and renormalizes each setting block to sum to one.
    pub fn rationalized(float: &FloatPhenomenon, max_denom: u64) -> Result<Self> {
        use num_traits::Zero;
        let s = float.scenario.clone();
        let mut table = float
            .table
            .iter()
            .map(|&v| crate::scalar::rationalize(v.clamp(0.0, 1.0), max_denom))
            .collect::<Result<Vec<_>>>()?;
        for (a, b) in s.setting_pairs() {
            let range = s.block(a, b);
            let sum = table[range.clone()].iter().fold(Rational::zero(), |acc, v| acc + v);
            if sum.is_zero() {
                return Err(Error::NonNormalized(format!("block (a={a}, b={b}) rounds to zero")));
            }
            for v in &mut table[range] {
                *v = v.clone() / sum.clone();
            }
        }
        Phenomenon::new(s, table)
    }
}

/// Single-party conditional table indexed by (outcome, local setting, remote setting).
#[derive(Debug, Clone, PartialEq)]
pub struct Marginal<T> {
    pub side: Side,
    n_local: usize,
    n_remote: usize,
    n_outcomes: usize,
    values: Vec<T>,
}

impl<T: Scalar> Marginal<T> {
    pub fn get(&self, outcome: usize, local: usize, remote: usize) -> &T {
        &self.values[(local * self.n_remote + remote) * self.n_outcomes + outcome]
    }

    pub fn n_local(&self) -> usize {
        self.n_local
    }

    pub fn n_remote(&self) -> usize {
        self.n_remote
    }

    pub fn n_outcomes(&self) -> usize {
        self.n_outcomes
    }
}

pub(crate) fn marginal_of<T: Scalar>(scenario: &Scenario, table: &[T], side: Side) -> Marginal<T> {
    let (n_local, n_remote) = match side {
        Side::Alice => (scenario.n_settings_alice, scenario.n_settings_bob),
        Side::Bob => (scenario.n_settings_bob, scenario.n_settings_alice),
    };
    let n_outcomes = scenario.n_outcomes(side);
    let mut values = vec![T::zero(); n_local * n_remote * n_outcomes];
    for (i, v) in table.iter().enumerate() {
        let c = scenario.cell(i);
        let (local, remote, outcome) = match side {
            Side::Alice => (c.a, c.b, c.x),
            Side::Bob => (c.b, c.a, c.y),
        };
        let slot = &mut values[(local * n_remote + remote) * n_outcomes + outcome];
        *slot = slot.clone() + v.clone();
    }
    Marginal {
        side,
        n_local,
        n_remote,
        n_outcomes,
        values,
    }
}

/// Range and per-block normalization check shared by phenomena and model responses.
pub(crate) fn check_table<T: Scalar>(scenario: &Scenario, table: &[T], what: &str) -> Result<()> {
    for (i, v) in table.iter().enumerate() {
        if !v.in_unit_interval(DEFAULT_TOL) {
            let c = scenario.cell(i);
            return Err(Error::InvalidProbability(format!(
                "{what} cell (a={}, b={}, x={}, y={}) = {:?} is outside [0, 1]",
                c.a, c.b, c.x, c.y, v
            )));
        }
    }
    for (a, b) in scenario.setting_pairs() {
        let sum = table[scenario.block(a, b)]
            .iter()
            .fold(T::zero(), |acc, v| acc + v.clone());
        if !sum.approx_eq(&T::one(), DEFAULT_TOL) {
            return Err(Error::NonNormalized(format!(
                "{what} block (a={a}, b={b}) sums to {}",
                sum.to_probability()
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn pr_box() -> ExactPhenomenon {
        Phenomenon::from_fn(Scenario::chsh(), |c| {
            if (c.x ^ c.y) == (c.a & c.b) {
                q(1, 2)
            } else {
                q(0, 1)
            }
        })
        .unwrap()
    }

    #[test]
    fn uniform_marginals_are_half() {
        let f: ExactPhenomenon = Phenomenon::uniform(Scenario::chsh());
        for side in [Side::Alice, Side::Bob] {
            let m = f.marginal(side);
            for o in 0..2 {
                for l in 0..2 {
                    for r in 0..2 {
                        assert_eq!(*m.get(o, l, r), q(1, 2));
                    }
                }
            }
        }
    }

    #[test]
    fn pr_box_marginals_are_half() {
        let m = pr_box().marginal(Side::Bob);
        assert!(m.values.iter().all(|v| *v == q(1, 2)));
    }

    #[test]
    fn copy_table_marginal_depends_on_remote_setting() {
        // Bob's outcome copies Alice's setting; Alice's outcome is a fair coin.
        let f = Phenomenon::from_fn(Scenario::chsh(), |c| {
            if c.y == c.a {
                q(1, 2)
            } else {
                q(0, 1)
            }
        })
        .unwrap();
        let m = f.marginal(Side::Bob);
        for b in 0..2 {
            assert_eq!(*m.get(1, b, 1), q(1, 1));
            assert_eq!(*m.get(1, b, 0), q(0, 1));
        }
    }

    #[test]
    fn rejects_non_normalized_block() {
        let mut t = vec![q(1, 4); 16];
        t[5] = q(0, 1);
        let err = Phenomenon::new(Scenario::chsh(), t).unwrap_err();
        assert!(matches!(err, Error::NonNormalized(ref m) if m.contains("(a=0, b=1)")), "{err}");
    }

    #[test]
    fn rejects_out_of_range() {
        let mut t = vec![0.25f64; 16];
        t[0] = 1.25;
        t[1] = -0.25;
        t[2] = -0.5;
        t[3] = 0.5;
        assert!(matches!(
            Phenomenon::new(Scenario::chsh(), t),
            Err(Error::InvalidProbability(_))
        ));
    }

    #[test]
    fn rationalized_blocks_sum_to_one() {
        let f = Phenomenon::from_fn(Scenario::chsh(), |c| if c.x == c.y { 0.4 } else { 0.1 }).unwrap();
        let e = ExactPhenomenon::rationalized(&f, 1_000_000).unwrap();
        assert_eq!(*e.prob(0, 0, 0, 0), q(2, 5));
    }
}

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;

use crate::error::{Error, Result};
use crate::rng::substream;

/// Upper limit on `n` for explicit truth tables.
pub const MAX_INPUT_BITS: u32 = 24;

/// An `n`-bit Boolean function stored as its truth table.
///
/// Entry `x` of the table is `f(x)`, where bit `i` of `x` is input bit `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanFunction {
    n: u32,
    table: Vec<bool>,
    weight: u64,
}

impl BooleanFunction {
    pub fn from_truth_table(n: u32, table: Vec<bool>) -> Result<Self> {
        check_bits(n)?;
        if table.len() != 1usize << n {
            return Err(Error::config(format!(
                "truth table has {} entries, expected 2^{n} = {}",
                table.len(),
                1u64 << n
            )));
        }
        let weight = table.iter().filter(|&&b| b).count() as u64;
        Ok(Self { n, table, weight })
    }

    pub fn from_fn(n: u32, f: impl Fn(usize) -> bool) -> Result<Self> {
        check_bits(n)?;
        Self::from_truth_table(n, (0..1usize << n).map(f).collect())
    }

    pub fn constant(n: u32, value: bool) -> Result<Self> {
        Self::from_fn(n, |_| value)
    }

    /// A pseudorandom function with exactly `weight` ones, fully determined by
    /// `seed`.
    pub fn with_weight(n: u32, weight: u64, seed: u64) -> Result<Self> {
        check_bits(n)?;
        let size = 1usize << n;
        if weight > size as u64 {
            return Err(Error::domain(format!(
                "weight {weight} exceeds 2^{n} = {size}"
            )));
        }
        let mut rng = substream(seed, 0);
        let mut table = vec![false; size];
        for x in sample(&mut rng, size, weight as usize) {
            table[x] = true;
        }
        Self::from_truth_table(n, table)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn domain_size(&self) -> usize {
        self.table.len()
    }

    /// `wt(f)`: the number of inputs mapped to 1.
    pub fn weight(&self) -> u64 {
        self.weight
    }

    pub fn eval(&self, x: usize) -> bool {
        self.table[x]
    }

    pub fn truth_table(&self) -> &[bool] {
        &self.table
    }

    /// `g(x) = f(x) ⊕ f(0)`. Constant functions map to weight 0 and balanced
    /// functions to weight `2^(n-1)`.
    pub fn shifted_by_origin(&self) -> Self {
        let origin = self.table[0];
        let table: Vec<bool> = self.table.iter().map(|&b| b ^ origin).collect();
        Self::from_truth_table(self.n, table).expect("same shape")
    }

    /// Parses the truth-table file format.
    ///
    /// ```text
    /// n=3
    /// 00010110
    /// ```
    ///
    /// or, for a pseudorandom function of a given weight,
    ///
    /// ```text
    /// n=6
    /// weight=16
    /// seed=42
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut n = None;
        let mut weight = None;
        let mut seed = None;
        let mut table = None;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some((key, value)) = line.split_once('=') {
                let value = value.trim();
                let parsed: u64 = value
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("`{value}` is not an integer")))?;
                match key.trim() {
                    "n" => n = Some(parsed),
                    "weight" => weight = Some(parsed),
                    "seed" => seed = Some(parsed),
                    other => return Err(Error::parse(line_no, format!("unknown key `{other}`"))),
                }
            } else if line.chars().all(|c| c == '0' || c == '1') {
                if table.is_some() {
                    return Err(Error::parse(line_no, "more than one truth-table line"));
                }
                table = Some((line_no, line.chars().map(|c| c == '1').collect::<Vec<_>>()));
            } else {
                return Err(Error::parse(line_no, format!("unrecognised line `{line}`")));
            }
        }

        let n = n.ok_or_else(|| Error::parse(1, "missing `n=<int>` line"))?;
        let n = u32::try_from(n)
            .ok()
            .filter(|&n| n <= MAX_INPUT_BITS)
            .ok_or_else(|| Error::parse(1, format!("n={n} exceeds {MAX_INPUT_BITS}")))?;
        match (table, weight, seed) {
            (Some((line_no, bits)), None, None) => {
                if bits.len() != 1usize << n {
                    return Err(Error::parse(
                        line_no,
                        format!(
                            "expected {} truth-table entries, found {}",
                            1u64 << n,
                            bits.len()
                        ),
                    ));
                }
                Self::from_truth_table(n, bits)
            }
            (None, Some(w), Some(s)) => Self::with_weight(n, w, s),
            (None, Some(_), None) => Err(Error::parse(1, "`weight=` requires `seed=`")),
            (None, None, _) => Err(Error::parse(1, "missing truth table or `weight=`/`seed=`")),
            (Some((line_no, _)), _, _) => Err(Error::parse(
                line_no,
                "a truth table cannot be combined with `weight=`/`seed=`",
            )),
        }
    }
}

impl FromStr for BooleanFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for BooleanFunction {
    /// Writes the explicit truth-table form accepted by [`BooleanFunction::parse`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.n)?;
        let bits: String = self
            .table
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect();
        writeln!(f, "{bits}")
    }
}

fn check_bits(n: u32) -> Result<()> {
    if n > MAX_INPUT_BITS {
        return Err(Error::domain(format!("n={n} exceeds {MAX_INPUT_BITS}")));
    }
    Ok(())
}

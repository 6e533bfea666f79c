use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::koszul::koszul_table;
use super::resolution::{free_resolution, LiftStrategy, ResolutionData};
use crate::error::{input_err, Result};
use crate::fim::{degrees_up_to, MultiIndex};
use crate::linalg::Field;
use crate::module::TruncatedModule;

/// `dim H_i(V)_n` for `i <= I` and `|n| <= N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyTable {
    m: usize,
    max_i: usize,
    top: usize,
    degrees: Vec<MultiIndex>,
    /// `dims[i][k]` at `degrees[k]`.
    dims: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableFile {
    #[serde(rename = "I")]
    max_i: usize,
    #[serde(rename = "N")]
    top: usize,
    entries: Vec<(usize, Vec<usize>, usize)>,
    t: Vec<i64>,
    censored: Vec<bool>,
}

impl HomologyTable {
    /// A table from per-index, per-degree dimensions on the window
    /// `degrees_up_to(m, top)`.
    pub fn new(m: usize, top: usize, dims: Vec<Vec<usize>>) -> Result<Self> {
        let degrees = degrees_up_to(m, top);
        if dims.is_empty() || dims.iter().any(|row| row.len() != degrees.len()) {
            return Err(input_err!("homology table rows must cover all {} degrees", degrees.len()));
        }
        Ok(HomologyTable { m, max_i: dims.len() - 1, top, degrees, dims })
    }

    /// `H_i = dim H_0(P_i) - rank(d̄_i) - rank(d̄_{i+1})`, using that the
    /// induced differentials have rank equal to the top-coordinate rank of
    /// the kernels of the resolution.
    pub fn from_resolution<F: Field>(res: &ResolutionData<F>, max_i: usize) -> Result<Self> {
        if res.levels.len() < max_i + 1 {
            return Err(input_err!("a table up to H_{max_i} needs {} resolution levels", max_i + 1));
        }
        let degrees = res.window.degrees().to_vec();
        let dims = (0..=max_i)
            .map(|i| {
                degrees
                    .iter()
                    .map(|n| {
                        let below = if i == 0 { 0 } else { res.top_rank(i - 1, n) };
                        res.top_dim(i, n) - below - res.top_rank(i, n)
                    })
                    .collect()
            })
            .collect();
        HomologyTable::new(res.window.m(), res.window.top(), dims)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn max_i(&self) -> usize {
        self.max_i
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn degrees(&self) -> &[MultiIndex] {
        &self.degrees
    }

    /// `dim H_i(V)_n`, zero outside the table.
    pub fn get(&self, i: usize, n: &MultiIndex) -> usize {
        if i > self.max_i {
            return 0;
        }
        self.degrees.iter().position(|x| x == n).map_or(0, |k| self.dims[i][k])
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.dims[i]
    }

    /// `t_i` within the window: the largest `|n|` with `H_i(V)_n != 0`, or -1.
    pub fn t(&self, i: usize) -> i64 {
        self.degrees
            .iter()
            .zip(&self.dims[i])
            .filter(|(_, d)| **d > 0)
            .map(|(n, _)| n.total() as i64)
            .max()
            .unwrap_or(-1)
    }

    pub fn t_all(&self) -> Vec<i64> {
        (0..=self.max_i).map(|i| self.t(i)).collect()
    }

    /// Whether row `i` is nonzero on the top band `|n| = N`, so that `t_i`
    /// may exceed the reported value.
    pub fn censored(&self, i: usize) -> bool {
        self.t(i) == self.top as i64
    }

    /// Restriction to rows `<= max_i` and degrees `|n| <= top`.
    pub fn truncate(&self, max_i: usize, top: usize) -> Result<HomologyTable> {
        if max_i > self.max_i || top > self.top {
            return Err(input_err!("cannot truncate a table (I = {}, N = {}) to (I = {max_i}, N = {top})", self.max_i, self.top));
        }
        let keep: Vec<usize> = (0..self.degrees.len()).filter(|&k| self.degrees[k].total() <= top).collect();
        let dims = (0..=max_i).map(|i| keep.iter().map(|&k| self.dims[i][k]).collect()).collect();
        HomologyTable::new(self.m, top, dims)
    }

    pub fn to_json(&self) -> String {
        let file = TableFile {
            max_i: self.max_i,
            top: self.top,
            entries: (0..=self.max_i)
                .flat_map(|i| {
                    self.degrees.iter().zip(&self.dims[i]).map(move |(n, d)| (i, n.coords().to_vec(), *d))
                })
                .collect(),
            t: self.t_all(),
            censored: (0..=self.max_i).map(|i| self.censored(i)).collect(),
        };
        serde_json::to_string(&file).expect("table serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TableFile = serde_json::from_str(text).map_err(|e| input_err!("homology table: {e}"))?;
        let m = file.entries.first().map(|e| e.1.len()).ok_or_else(|| input_err!("homology table: no entries"))?;
        let degrees = degrees_up_to(m, file.top);
        let mut dims = vec![vec![None; degrees.len()]; file.max_i + 1];
        for (k, (i, n, d)) in file.entries.iter().enumerate() {
            let n = MultiIndex::new(n.clone());
            let slot = degrees
                .iter()
                .position(|x| *x == n)
                .filter(|_| *i <= file.max_i)
                .ok_or_else(|| input_err!("homology table: entries[{k}] = ({i}, {n}) outside I = {}, N = {}", file.max_i, file.top))?;
            dims[*i][slot] = Some(*d);
        }
        let dims = dims
            .into_iter()
            .map(|row| row.into_iter().collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| input_err!("homology table: missing entries"))?;
        let table = HomologyTable::new(m, file.top, dims)?;
        if table.t_all() != file.t {
            return Err(input_err!("homology table: t = {:?} does not match the entries", file.t));
        }
        Ok(table)
    }

    /// Aligned text: one row per degree, one column per homological index.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let width = self.degrees.last().map_or(3, |n| n.to_string().len()).max(3);
        let _ = write!(out, "{:>width$}", "n");
        for i in 0..=self.max_i {
            let _ = write!(out, " {:>5}", format!("H_{i}"));
        }
        out.push('\n');
        for (k, n) in self.degrees.iter().enumerate() {
            let _ = write!(out, "{:>width$}", n.to_string());
            for i in 0..=self.max_i {
                let _ = write!(out, " {:>5}", self.dims[i][k]);
            }
            out.push('\n');
        }
        let _ = write!(out, "{:>width$}", "t");
        for i in 0..=self.max_i {
            let mark = if self.censored(i) { "+" } else { "" };
            let _ = write!(out, " {:>5}", format!("{}{mark}", self.t(i)));
        }
        out.push('\n');
        out
    }
}

/// Homology through a free resolution with pivot-greedy lifts.
pub fn homology_table<F: Field>(v: &TruncatedModule<F>, max_i: usize) -> Result<HomologyTable> {
    homology_with(v, max_i, Engine::Resolution(LiftStrategy::PivotGreedy))
}

/// Which construction computes a homology table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    Resolution(LiftStrategy),
    Koszul,
}

impl Engine {
    pub fn parse(s: &str) -> Result<Engine> {
        match s {
            "resolution" => Ok(Engine::Resolution(LiftStrategy::PivotGreedy)),
            "koszul" => Ok(Engine::Koszul),
            _ => Err(input_err!("unknown engine '{s}' (expected resolution or koszul)")),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Engine::Resolution(_) => "resolution",
            Engine::Koszul => "koszul",
        }
    }
}

pub fn homology_with<F: Field>(v: &TruncatedModule<F>, max_i: usize, engine: Engine) -> Result<HomologyTable> {
    match engine {
        Engine::Resolution(strategy) => {
            let res = free_resolution(v, max_i + 1, strategy)?;
            HomologyTable::from_resolution(&res, max_i)
        }
        Engine::Koszul => koszul_table(v, max_i),
    }
}

/// Window-truncated regularity `max_i (t_i - i)` and, for a bound `rho`,
/// the per-index margins `i + rho - t_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityReport {
    pub reg: i64,
    pub t: Vec<i64>,
    pub censored: Vec<bool>,
    /// No row reaches the top band of the window.
    pub conclusive: bool,
    pub slack: Option<BigInt>,
    pub margins: Option<Vec<BigInt>>,
}

pub fn regularity_report(table: &HomologyTable, bound: Option<&BigInt>) -> RegularityReport {
    let t = table.t_all();
    let reg = t.iter().enumerate().map(|(i, &ti)| ti - i as i64).max().unwrap_or(-1).max(-1);
    let censored: Vec<bool> = (0..=table.max_i()).map(|i| table.censored(i)).collect();
    let conclusive = !censored.iter().any(|&c| c);
    let slack = bound.map(|b| b - BigInt::from(reg));
    let margins =
        bound.map(|b| t.iter().enumerate().map(|(i, &ti)| b + BigInt::from(i as i64) - BigInt::from(ti)).collect());
    RegularityReport { reg, t, censored, conclusive, slack, margins }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::PrimeField;
    use crate::module::{free_module, Window};

    fn mi(c: &[usize]) -> MultiIndex {
        MultiIndex::new(c.to_vec())
    }

    #[test]
    fn free_module_table_and_regularity() {
        let f = PrimeField::new(101).unwrap();
        let w = mi(&[1, 2]);
        let v = free_module(&f, &w, Window::new(2, 5)).unwrap();
        let table = homology_table(&v, 2).unwrap();
        for (k, n) in table.degrees().iter().enumerate() {
            assert_eq!(table.row(0)[k], if *n == w { 2 } else { 0 });
            assert_eq!(table.row(1)[k], 0);
            assert_eq!(table.row(2)[k], 0);
        }
        let rep = regularity_report(&table, Some(&BigInt::from(5)));
        assert_eq!(rep.reg, 3);
        assert_eq!(rep.slack, Some(BigInt::from(2)));
        assert!(rep.conclusive);
    }

    #[test]
    fn zero_module_has_regularity_minus_one() {
        let f = PrimeField::new(101).unwrap();
        let v = TruncatedModule::zero(&f, Window::new(1, 3));
        let table = homology_table(&v, 1).unwrap();
        assert_eq!(regularity_report(&table, None).reg, -1);
    }

    #[test]
    fn json_roundtrip() {
        let table = HomologyTable::new(1, 2, vec![vec![1, 0, 0], vec![0, 0, 2]]).unwrap();
        let text = table.to_json();
        assert_eq!(text, r#"{"I":1,"N":2,"entries":[[0,[0],1],[0,[1],0],[0,[2],0],[1,[0],0],[1,[1],0],[1,[2],2]],"t":[0,2],"censored":[false,true]}"#);
        assert_eq!(HomologyTable::from_json(&text).unwrap(), table);
        assert!(table.render().contains("H_1"));
    }
}

//! Reference error tables shipped with the binary.

use anyhow::{bail, Context, Result};

const TABLES: &str = include_str!("../data/reference_tables.csv");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Table {
    E,
    EStar,
}

impl Table {
    pub fn label(self) -> &'static str {
        match self {
            Table::E => "e",
            Table::EStar => "estar",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    L2,
    Linf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub problem: String,
    pub table: Table,
    pub lambda: f64,
    pub n: usize,
    pub norm: Norm,
    pub value: f64,
}

pub fn load() -> Result<Vec<Cell>> {
    let mut cells = Vec::new();
    for (i, line) in TABLES.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 6 {
            bail!("reference table line {}: expected 6 fields", i + 1);
        }
        let table = match f[1] {
            "e" => Table::E,
            "estar" => Table::EStar,
            other => bail!("reference table line {}: bad table `{other}`", i + 1),
        };
        let norm = match f[4] {
            "L2" => Norm::L2,
            "Linf" => Norm::Linf,
            other => bail!("reference table line {}: bad norm `{other}`", i + 1),
        };
        cells.push(Cell {
            problem: f[0].to_string(),
            table,
            lambda: f[2].parse().with_context(|| format!("line {}", i + 1))?,
            n: f[3].parse().with_context(|| format!("line {}", i + 1))?,
            norm,
            value: f[5].parse().with_context(|| format!("line {}", i + 1))?,
        });
    }
    Ok(cells)
}

/// Cells of one problem and table, ordered by `n` then norm.
pub fn select<'a>(cells: &'a [Cell], problem: &str, table: Table) -> Vec<&'a Cell> {
    let mut out: Vec<&Cell> = cells
        .iter()
        .filter(|c| c.problem == problem && c.table == table)
        .collect();
    out.sort_by_key(|c| (c.n, c.norm == Norm::Linf));
    out
}

/// Distinct degrees of one table, ascending.
pub fn grid(cells: &[Cell], problem: &str, table: Table) -> Vec<usize> {
    let mut ns: Vec<usize> = select(cells, problem, table).iter().map(|c| c.n).collect();
    ns.dedup();
    ns
}

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};

use super::budget::{Meter, SearchBudget};
use super::search::{cover_search, intersection_closure, ListProblem};

/// Boolean matrix stored as one column bitset per row.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoolMatrix {
    cols: usize,
    rows: Vec<FixedBitSet>,
}

impl BoolMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        BoolMatrix {
            cols,
            rows: vec![FixedBitSet::with_capacity(cols); rows],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut m = Self::new(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.rows[i].set(j, f(i, j));
            }
        }
        m
    }

    /// Parses rows of `0`/`1` characters; other characters are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let rows: Vec<Vec<bool>> = text
            .lines()
            .map(|l| {
                l.chars()
                    .filter(|c| *c == '0' || *c == '1')
                    .map(|c| c == '1')
                    .collect::<Vec<_>>()
            })
            .filter(|r| !r.is_empty())
            .collect();
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Precondition("matrix rows differ in length".into()));
        }
        Ok(Self::from_fn(rows.len(), cols, |i, j| rows[i][j]))
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        self.rows[i].set(j, v);
    }

    pub fn row(&self, i: usize) -> &FixedBitSet {
        &self.rows[i]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.n_rows(), |i, j| self.get(j, i))
    }

    /// Restriction to the given rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]))
    }

    pub fn count_ones(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones(..)).sum()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| (0..self.cols).map(|j| if r.contains(j) { '1' } else { '0' }).collect())
            .collect()
    }

    fn row_masks(&self) -> Option<Vec<u64>> {
        (self.cols <= 64).then(|| self.rows.iter().map(super::search::mask_of).collect())
    }
}

/// Bicliques whose products are contained in a relation and jointly cover it.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BicliqueCover {
    pub bicliques: Vec<(Vec<usize>, Vec<usize>)>,
}

impl BicliqueCover {
    pub fn len(&self) -> usize {
        self.bicliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bicliques.is_empty()
    }

    pub fn is_cover_of(&self, m: &BoolMatrix) -> bool {
        let mut covered = BoolMatrix::new(m.n_rows(), m.n_cols());
        for (rows, cols) in &self.bicliques {
            for &i in rows {
                for &j in cols {
                    if i >= m.n_rows() || j >= m.n_cols() || !m.get(i, j) {
                        return false;
                    }
                    covered.set(i, j, true);
                }
            }
        }
        &covered == m
    }

    fn transposed(self) -> Self {
        BicliqueCover {
            bicliques: self.bicliques.into_iter().map(|(r, c)| (c, r)).collect(),
        }
    }
}

/// Minimum biclique cover size, or bounds on it when the budget runs out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Dimension {
    pub lower: usize,
    pub upper: usize,
    pub exact: bool,
    /// A cover of size `upper`.
    pub cover: BicliqueCover,
}

/// Distinct nonzero rows as bicliques: the trivial cover.
fn row_cover(m: &BoolMatrix) -> BicliqueCover {
    let mut bicliques: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for i in 0..m.n_rows() {
        let cols: Vec<usize> = m.row(i).ones().collect();
        if cols.is_empty() {
            continue;
        }
        match bicliques.iter_mut().find(|(_, c)| *c == cols) {
            Some((rows, _)) => rows.push(i),
            None => bicliques.push((vec![i], cols)),
        }
    }
    BicliqueCover { bicliques }
}

fn trivial_bounds(m: &BoolMatrix) -> Dimension {
    let by_rows = row_cover(m);
    let by_cols = row_cover(&m.transpose()).transposed();
    let cover = if by_cols.len() < by_rows.len() {
        by_cols
    } else {
        by_rows
    };
    Dimension {
        lower: usize::from(m.count_ones() > 0),
        upper: cover.len(),
        exact: cover.len() <= 1,
        cover,
    }
}

/// Bipartite dimension through set bases: a cover of size `k` exists iff the nonzero rows,
/// as column sets, are unions from a family of `k` sets. Basis members may be taken from
/// the intersections of rows, since enlarging a member to the intersection of the rows it
/// is used in keeps every union intact.
pub fn bipartite_dimension(m: &BoolMatrix, budget: &SearchBudget) -> Result<Dimension> {
    if m.n_cols() > 64 && m.n_rows() <= 64 {
        let mut d = bipartite_dimension(&m.transpose(), budget)?;
        d.cover = d.cover.transposed();
        return Ok(d);
    }
    let rows = m
        .row_masks()
        .ok_or_else(|| Error::budget("matrix columns for set-basis search", 64u64))?;
    let mut best = trivial_bounds(m);
    if best.exact {
        return Ok(best);
    }
    let mut targets: Vec<u64> = rows.iter().copied().filter(|&r| r != 0).collect();
    targets.sort_unstable();
    targets.dedup();
    let pool = intersection_closure(&targets, 1 << 16)?;
    let p = ListProblem {
        targets,
        pool: &pool,
        accept: |_: &[u64]| true,
        extend: false,
    };
    let mut meter = budget.meter();
    for k in best.lower.max(1)..best.upper {
        match cover_search(&p, k, &mut meter) {
            Ok(Some(basis)) => {
                let cover = BicliqueCover {
                    bicliques: basis
                        .iter()
                        .map(|&b| {
                            let rs = (0..rows.len()).filter(|&i| b & !rows[i] == 0).collect();
                            let cs = (0..64).filter(|&j| b >> j & 1 == 1).collect();
                            (rs, cs)
                        })
                        .collect(),
                };
                return Ok(Dimension {
                    lower: k,
                    upper: k,
                    exact: true,
                    cover,
                });
            }
            Ok(None) => best.lower = k + 1,
            Err(e) if e.is_budget() => return Ok(best),
            Err(e) => return Err(e),
        }
    }
    best.lower = best.upper;
    best.exact = true;
    Ok(best)
}

/// Maximal bicliques by closing every subset of rows (rows ≤ 16) or columns.
pub fn maximal_bicliques(m: &BoolMatrix) -> Result<Vec<(Vec<usize>, Vec<usize>)>> {
    if m.n_rows() > 16 {
        if m.n_cols() > 16 {
            return Err(Error::budget("rows or columns for biclique enumeration", 16u64));
        }
        let t = maximal_bicliques(&m.transpose())?;
        let mut out: Vec<_> = t.into_iter().map(|(r, c)| (c, r)).collect();
        out.sort();
        return Ok(out);
    }
    let (nr, nc) = (m.n_rows(), m.n_cols());
    let mut out = Vec::new();
    for subset in 1u32..1 << nr {
        let rows: Vec<usize> = (0..nr).filter(|&i| subset >> i & 1 == 1).collect();
        let cols: Vec<usize> = (0..nc).filter(|&j| rows.iter().all(|&i| m.get(i, j))).collect();
        if cols.is_empty() {
            continue;
        }
        let closed: Vec<usize> = (0..nr).filter(|&i| cols.iter().all(|&j| m.get(i, j))).collect();
        if closed == rows {
            out.push((rows, cols));
        }
    }
    out.sort();
    Ok(out)
}

/// Bipartite dimension as a minimum set cover of the one-entries by maximal bicliques.
/// Independent of [`bipartite_dimension`]; meant for cross-checking small matrices.
pub fn bipartite_dimension_by_bicliques(m: &BoolMatrix, budget: &SearchBudget) -> Result<Dimension> {
    let bicliques = maximal_bicliques(m)?;
    let entries: Vec<(usize, usize)> = (0..m.n_rows())
        .flat_map(|i| m.row(i).ones().map(move |j| (i, j)))
        .collect();
    let covers: Vec<FixedBitSet> = bicliques
        .iter()
        .map(|(rs, cs)| {
            let mut s = FixedBitSet::with_capacity(entries.len());
            for (e, (i, j)) in entries.iter().enumerate() {
                s.set(e, rs.contains(i) && cs.contains(j));
            }
            s
        })
        .collect();
    fn go(
        covers: &[FixedBitSet],
        covered: &FixedBitSet,
        left: usize,
        chosen: &mut Vec<usize>,
        meter: &mut Meter,
    ) -> Result<bool> {
        meter.tick(1)?;
        let Some(e) = (0..covered.len()).find(|&e| !covered.contains(e)) else {
            return Ok(true);
        };
        if left == 0 {
            return Ok(false);
        }
        for (b, c) in covers.iter().enumerate() {
            if c.contains(e) {
                let mut next = covered.clone();
                next.union_with(c);
                chosen.push(b);
                if go(covers, &next, left - 1, chosen, meter)? {
                    return Ok(true);
                }
                chosen.pop();
            }
        }
        Ok(false)
    }
    let mut best = trivial_bounds(m);
    let mut meter = budget.meter();
    let start = FixedBitSet::with_capacity(entries.len());
    for k in 0..=best.upper {
        let mut chosen = Vec::new();
        match go(&covers, &start, k, &mut chosen, &mut meter) {
            Ok(true) => {
                return Ok(Dimension {
                    lower: k,
                    upper: k,
                    exact: true,
                    cover: BicliqueCover {
                        bicliques: chosen.iter().map(|&b| bicliques[b].clone()).collect(),
                    },
                })
            }
            Ok(false) => best.lower = k + 1,
            Err(e) if e.is_budget() => return Ok(best),
            Err(e) => return Err(e),
        }
    }
    unreachable!("the trivial cover has size upper")
}

/// Row and column orders making a square matrix upper unitriangular, if any.
///
/// Peels a row with a single one among the remaining columns and places it last. This is
/// exact: in any valid order that row sits on the diagonal of that column, and moving both
/// to the end keeps the order valid. Non-square matrices yield `None`.
pub fn unitriangularizable(m: &BoolMatrix) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = m.n_rows();
    if m.n_cols() != n {
        return None;
    }
    let mut rows_left: Vec<usize> = (0..n).collect();
    let mut cols_left = FixedBitSet::with_capacity(n);
    cols_left.insert_range(..);
    let (mut rows, mut cols) = (Vec::with_capacity(n), Vec::with_capacity(n));
    while !rows_left.is_empty() {
        let (pos, col) = rows_left.iter().enumerate().find_map(|(pos, &i)| {
            let mut ones = m.row(i).intersection(&cols_left);
            let first = ones.next()?;
            ones.next().is_none().then_some((pos, first))
        })?;
        rows.push(rows_left.remove(pos));
        cols.push(col);
        cols_left.set(col, false);
    }
    rows.reverse();
    cols.reverse();
    Some((rows, cols))
}

/// Checks a witness of [`unitriangularizable`].
pub fn is_upper_unitriangular(m: &BoolMatrix, rows: &[usize], cols: &[usize]) -> bool {
    let n = m.n_rows();
    let perm = |p: &[usize]| {
        let mut s: Vec<usize> = p.to_vec();
        s.sort_unstable();
        s == (0..n).collect::<Vec<_>>()
    };
    m.n_cols() == n
        && perm(rows)
        && perm(cols)
        && (0..n).all(|i| m.get(rows[i], cols[i]) && (0..i).all(|j| !m.get(rows[i], cols[j])))
}

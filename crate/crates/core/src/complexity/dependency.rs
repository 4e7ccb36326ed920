use std::collections::HashMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::jsl_automata::duality::dual_derivative;
use crate::jsl_automata::minimal_jsl;
use crate::lang_core::{Alphabet, LanguageHandle, Symbol};
use crate::semilattice::{is_isomorphism, iso_search, FiniteSemilattice, JslMorphism, ISO_BUDGET, MAX_ELEMENTS};

use super::matrix::BoolMatrix;

/// `u⁻¹L` related to `v⁻¹ rev L` iff `u·rev(v) ∈ L`, over all left derivatives of `L` and
/// of `rev L`, in the state order of their minimal dfas.
#[derive(Clone, Debug)]
pub struct DependencyRelation {
    pub language: LanguageHandle,
    pub rows: Vec<LanguageHandle>,
    /// A word `u` with `u⁻¹L` the row language.
    pub row_words: Vec<Vec<Symbol>>,
    /// Left derivatives of `rev L`.
    pub cols: Vec<LanguageHandle>,
    pub col_words: Vec<Vec<Symbol>>,
    pub matrix: BoolMatrix,
}

fn reversed(w: &[Symbol]) -> Vec<Symbol> {
    w.iter().rev().copied().collect()
}

/// Members that are not the union of the members strictly below them (nonempty).
fn union_irreducible_languages(family: &[LanguageHandle]) -> Vec<usize> {
    let k = family.first().map_or(1, LanguageHandle::n_symbols);
    (0..family.len())
        .filter(|&i| {
            let x = &family[i];
            let below = family.iter().filter(|y| y.is_subset(x) && *y != x);
            !x.is_empty() && &LanguageHandle::union_all(k, below) != x
        })
        .collect()
}

pub fn dependency(l: &LanguageHandle) -> DependencyRelation {
    let row_words = l.derivative_words();
    let col_words = l.reverse().derivative_words();
    let matrix = BoolMatrix::from_fn(row_words.len(), col_words.len(), |i, j| {
        let w: Vec<Symbol> = row_words[i]
            .iter()
            .copied()
            .chain(col_words[j].iter().rev().copied())
            .collect();
        l.contains(&w)
    });
    let r = l.reverse();
    DependencyRelation {
        language: l.clone(),
        rows: row_words.iter().map(|u| l.left_derivative(u)).collect(),
        cols: col_words.iter().map(|v| r.left_derivative(v)).collect(),
        row_words,
        col_words,
        matrix,
    }
}

impl DependencyRelation {
    /// Indices of the ∪-irreducible row and column derivatives.
    pub fn irreducible_indices(&self) -> (Vec<usize>, Vec<usize>) {
        (
            union_irreducible_languages(&self.rows),
            union_irreducible_languages(&self.cols),
        )
    }

    /// Restriction to the ∪-irreducible derivatives of `L` and `rev L`.
    pub fn reduced(&self) -> DependencyRelation {
        let (ri, ci) = self.irreducible_indices();
        DependencyRelation {
            language: self.language.clone(),
            rows: ri.iter().map(|&i| self.rows[i].clone()).collect(),
            row_words: ri.iter().map(|&i| self.row_words[i].clone()).collect(),
            cols: ci.iter().map(|&j| self.cols[j].clone()).collect(),
            col_words: ci.iter().map(|&j| self.col_words[j].clone()).collect(),
            matrix: self.matrix.submatrix(&ri, &ci),
        }
    }

    /// Union closure of the rows, as column sets.
    pub fn row_closure(&self) -> Result<FiniteSemilattice> {
        let rows: Vec<FixedBitSet> = (0..self.matrix.n_rows()).map(|i| self.matrix.row(i).clone()).collect();
        FiniteSemilattice::from_union_closure(self.matrix.n_cols(), &rows, MAX_ELEMENTS)
    }

    /// Entries agree with membership for other representatives: each row word is replaced
    /// by its extensions `u·x` that reach the same derivative, and likewise for columns.
    pub fn check_representatives(&self, extra: &[Vec<Symbol>]) -> Result<()> {
        let l = &self.language;
        let r = l.reverse();
        for u in &self.row_words {
            for x in extra {
                let u2: Vec<Symbol> = u.iter().chain(x).copied().collect();
                let Some(i2) = self.rows.iter().position(|k| *k == l.left_derivative(&u2)) else {
                    continue;
                };
                for (j, v) in self.col_words.iter().enumerate() {
                    let w: Vec<Symbol> = u2.iter().copied().chain(v.iter().rev().copied()).collect();
                    if l.contains(&w) != self.matrix.get(i2, j) {
                        return Err(Error::Check(format!(
                            "entry ({i2}, {j}) depends on the row representative"
                        )));
                    }
                }
            }
        }
        for v in &self.col_words {
            for x in extra {
                let v2: Vec<Symbol> = v.iter().chain(x).copied().collect();
                let Some(j2) = self.cols.iter().position(|k| *k == r.left_derivative(&v2)) else {
                    continue;
                };
                for (i, u) in self.row_words.iter().enumerate() {
                    let w: Vec<Symbol> = u.iter().copied().chain(v2.iter().rev().copied()).collect();
                    if l.contains(&w) != self.matrix.get(i, j2) {
                        return Err(Error::Check(format!(
                            "entry ({i}, {j2}) depends on the column representative"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Part (1): `K ↦ {v⁻¹ rev L : rev(v) ∈ K}` maps the quotient semilattice of `L`
    /// isomorphically onto the union closure of the rows. Checked both through this explicit
    /// map and by an independent isomorphism search.
    pub fn check_union_closure(&self) -> Result<()> {
        let q = minimal_jsl(&self.language)?;
        let closure = Arc::new(self.row_closure()?);
        let map = q
            .state_languages()
            .iter()
            .map(|k| {
                let cols = crate::bits::bitset(
                    self.cols.len(),
                    (0..self.cols.len()).filter(|&j| k.contains(&reversed(&self.col_words[j]))),
                );
                closure
                    .element_with_label(&cols)
                    .map(|e| e as u32)
                    .ok_or_else(|| Error::Check("image of a quotient is not a union of rows".into()))
            })
            .collect::<Result<Vec<u32>>>()?;
        let f = JslMorphism::new_unchecked(q.semilattice().clone(), closure.clone(), map);
        if !is_isomorphism(&f) {
            return Err(Error::Check(
                "explicit map onto the row closure is not an isomorphism".into(),
            ));
        }
        if iso_search(q.semilattice(), &closure, ISO_BUDGET)?.is_none() {
            return Err(Error::Check("no isomorphism between quotients and row closure".into()));
        }
        Ok(())
    }

    /// Part (2): an entry is set iff the row derivative is not below the dual of the column.
    pub fn check_entries_by_duals(&self) -> Result<()> {
        let duals: Vec<LanguageHandle> = self.cols.iter().map(|k| dual_derivative(&self.language, k)).collect();
        for (i, row) in self.rows.iter().enumerate() {
            for (j, d) in duals.iter().enumerate() {
                if self.matrix.get(i, j) == row.is_subset(d) {
                    return Err(Error::Check(format!(
                        "entry ({i}, {j}) disagrees with the dual derivative"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Part (3): on irreducibles the relation is non-inclusion in the dual, and the dual
    /// map sends the irreducible derivatives of `rev L` bijectively onto the
    /// meet-irreducible quotients of `L`.
    pub fn check_reduced_square(&self) -> Result<()> {
        let red = self.reduced();
        let q = minimal_jsl(&self.language)?;
        let s = q.semilattice();
        let index: HashMap<&LanguageHandle, usize> =
            q.state_languages().iter().enumerate().map(|(x, k)| (k, x)).collect();
        let mut images = Vec::new();
        for (j, k) in red.cols.iter().enumerate() {
            let d = dual_derivative(&self.language, k);
            let x = *index
                .get(&d)
                .ok_or_else(|| Error::Check("dual of an irreducible is not a quotient".into()))?;
            images.push(x);
            for (i, row) in red.rows.iter().enumerate() {
                if red.matrix.get(i, j) == row.is_subset(&d) {
                    return Err(Error::Check(format!(
                        "reduced entry ({i}, {j}) disagrees with non-inclusion"
                    )));
                }
            }
        }
        let mut sorted = images.clone();
        sorted.sort_unstable();
        sorted.dedup();
        let mut meets = s.meet_irreducibles();
        meets.sort_unstable();
        if sorted.len() != images.len() || sorted != meets {
            return Err(Error::Check(
                "dual map is not a bijection onto the meet-irreducibles".into(),
            ));
        }
        Ok(())
    }

    pub fn check_all(&self) -> Result<()> {
        self.check_union_closure()?;
        self.check_entries_by_duals()?;
        self.check_reduced_square()
    }

    pub fn to_json(&self, alphabet: &Alphabet) -> Value {
        let words = |ws: &[Vec<Symbol>]| ws.iter().map(|w| alphabet.format_word(w)).collect::<Vec<_>>();
        json!({
            "row_words": words(&self.row_words),
            "col_words": words(&self.col_words),
            "matrix": self.matrix.to_strings(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang_core::{all_words, parse_regex};

    fn lang(re: &str, syms: &[&str]) -> LanguageHandle {
        let a = Alphabet::new(syms.iter().copied()).unwrap();
        LanguageHandle::from_regex(&parse_regex(re, &a).unwrap(), a.len())
    }

    #[test]
    fn universal_language_is_one_true_entry() {
        let d = dependency(&LanguageHandle::universal(2));
        assert_eq!(d.matrix.to_strings(), vec!["1"]);
    }

    /// `{a, aa}` against the membership table of `u·rev(v)` over the four derivatives.
    #[test]
    fn two_word_language_table() {
        let l = lang("a+aa", &["a"]);
        let d = dependency(&l);
        assert_eq!((d.matrix.n_rows(), d.matrix.n_cols()), (4, 4));
        let brute = BoolMatrix::from_fn(4, 4, |i, j| {
            let w: Vec<Symbol> = vec![0; d.row_words[i].len() + d.col_words[j].len()];
            w.len() == 1 || w.len() == 2
        });
        assert_eq!(d.matrix, brute);
        let empty = d.rows.iter().position(LanguageHandle::is_empty).unwrap();
        assert_eq!(d.matrix.row(empty).count_ones(..), 0);
        d.check_all().unwrap();
    }

    #[test]
    fn theorem_parts_on_named_languages() {
        for re in ["(a+b)*a(a+b)", "a(b+ab)*", "(ab)*", "a*b*", "b(a+b)*+a"] {
            let d = dependency(&lang(re, &["a", "b"]));
            d.check_all().unwrap();
            d.check_representatives(&all_words(2, 3)).unwrap();
        }
    }

    #[test]
    fn reduced_keeps_irreducibles_only() {
        // L, L+Σ and L+ε are irreducible; L+Σ+ε is their union
        let d = dependency(&lang("(a+b)*a(a+b)", &["a", "b"]));
        let r = d.reduced();
        assert_eq!(r.matrix.n_rows(), 3);
        assert!(r.rows.iter().all(|k| !k.is_empty()));
    }
}

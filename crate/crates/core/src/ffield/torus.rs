use std::ops::Range;

use super::field::{FieldSpec, FqElem};
use super::FieldError;

/// The points of `(F_q^*)^n` in a fixed order.
///
/// Point number `i` has exponent digits `e_0, ..., e_{n-1}` in base `q - 1`
/// (`e_0` least significant) and coordinates `t_j = g^(e_j)`, where `g` is
/// the field's smallest primitive element. Index ranges are independent,
/// so contiguous chunks can be consumed in parallel.
#[derive(Clone, Debug)]
pub struct TorusEnumeration {
    field: FieldSpec,
    n: usize,
    generator: FqElem,
    unit_count: u64,
    len: u64,
}

/// `(q-1)^n`, saturating at `u128::MAX`.
pub fn torus_size(q_minus_one: u64, n: usize) -> u128 {
    (0..n).fold(1u128, |acc, _| acc.saturating_mul(q_minus_one as u128))
}

pub fn enumerate_torus(
    field: &FieldSpec,
    n: usize,
    budget: u64,
) -> Result<TorusEnumeration, FieldError> {
    let q = field
        .order_u64()
        .ok_or_else(|| FieldError::NotEnumerable(field.order().to_string()))?;
    let required = torus_size(q - 1, n);
    if required > budget as u128 {
        return Err(FieldError::BudgetExceeded {
            required: required.to_string(),
            budget,
        });
    }
    Ok(TorusEnumeration {
        field: field.clone(),
        n,
        generator: field.generator()?,
        unit_count: q - 1,
        len: required as u64,
    })
}

impl TorusEnumeration {
    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn generator(&self) -> &FqElem {
        &self.generator
    }

    /// Exponent digits of point `index`.
    pub fn digits(&self, mut index: u64) -> Vec<u64> {
        (0..self.n)
            .map(|_| {
                let d = index % self.unit_count;
                index /= self.unit_count;
                d
            })
            .collect()
    }

    pub fn point(&self, index: u64) -> Vec<FqElem> {
        self.digits(index)
            .into_iter()
            .map(|e| self.generator.pow(e))
            .collect()
    }

    /// Splits `0..len` into `parts` contiguous, nearly equal ranges.
    pub fn chunks(&self, parts: usize) -> Vec<Range<u64>> {
        split_range(self.len, parts)
    }

    pub fn iter(&self) -> TorusIter<'_> {
        self.iter_range(0..self.len)
    }

    pub fn iter_range(&self, range: Range<u64>) -> TorusIter<'_> {
        let start = range.start.min(range.end);
        TorusIter {
            torus: self,
            digits: self.digits(start),
            current: self.point(start),
            remaining: range.end - start,
        }
    }
}

pub(crate) fn split_range(len: u64, parts: usize) -> Vec<Range<u64>> {
    let parts = (parts.max(1) as u64).min(len.max(1));
    let base = len / parts;
    let extra = len % parts;
    let mut out = Vec::with_capacity(parts as usize);
    let mut start = 0;
    for i in 0..parts {
        let size = base + u64::from(i < extra);
        out.push(start..start + size);
        start += size;
    }
    out
}

pub struct TorusIter<'a> {
    torus: &'a TorusEnumeration,
    digits: Vec<u64>,
    current: Vec<FqElem>,
    remaining: u64,
}

impl Iterator for TorusIter<'_> {
    type Item = Vec<FqElem>;

    fn next(&mut self) -> Option<Vec<FqElem>> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let out = self.current.clone();
        if self.remaining > 0 {
            for j in 0..self.torus.n {
                self.digits[j] += 1;
                if self.digits[j] < self.torus.unit_count {
                    self.current[j] = &self.current[j] * &self.torus.generator;
                    break;
                }
                self.digits[j] = 0;
                self.current[j] = self.torus.field.one();
            }
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = self.remaining as usize;
        (r, Some(r))
    }
}

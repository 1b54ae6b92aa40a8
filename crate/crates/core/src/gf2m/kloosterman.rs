//! Binary Kloosterman sums
//! `k_m(a, b) = sum_{x != 0} (-1)^{Tr(a x + b / x)}` over GF(2^m), with
//! `k_m(a) = k_m(a, 1)`.
//!
//! `k_m(1)` is available by three independent routes: the direct sum, the
//! linear recursion `k_{m+2} = -k_{m+1} - 2 k_m` seeded with `k_1 = 1`,
//! `k_2 = 3`, and Carlitz's alternating binomial sum.

use std::collections::BTreeSet;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::{Gf2Element, Gf2Field};
use crate::error::{Error, Result};

/// Largest degree for which a full table is built.
pub const MAX_TABLE_DEGREE: u32 = 20;

/// Largest extension degree `m * s` accepted by [`kloosterman_lifted_direct`].
pub const MAX_LIFT_DEGREE: u32 = 20;

/// Direct evaluation of `k_m(a)`.
pub fn kloosterman(field: &Gf2Field, a: Gf2Element) -> i64 {
    kloosterman2(field, a, Gf2Element::ONE)
}

/// Direct evaluation of the two-parameter sum `k_m(a, b)`.
pub fn kloosterman2(field: &Gf2Field, a: Gf2Element, b: Gf2Element) -> i64 {
    field
        .nonzero_elements()
        .map(|x| {
            let xinv = field.inv(x).expect("x is nonzero");
            let arg = field.add(field.mul(a, x), field.mul(b, xinv));
            sign(field.abs_trace(arg))
        })
        .sum()
}

fn sign(bit: u8) -> i64 {
    if bit == 0 {
        1
    } else {
        -1
    }
}

/// `k_m(1)` from the recursion `k_{m+2}(1) + k_{m+1}(1) + 2 k_m(1) = 0`.
pub fn kloosterman_one_recursive(m: u32) -> Result<i64> {
    if m == 0 || m > 100 {
        return Err(Error::InvalidParameter(format!("m = {m} outside 1..=100")));
    }
    let (mut prev, mut cur) = (1i64, 3i64);
    if m == 1 {
        return Ok(prev);
    }
    for _ in 2..m {
        let next = -cur - 2 * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

fn binomial(n: u64, k: u64) -> i128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

/// `k_m(1) = -sum_{j=0}^{floor(m/2)} (-1)^{m-j} (m/(m-j)) C(m-j, j) 2^j`.
pub fn kloosterman_one_carlitz(m: u32) -> Result<i64> {
    if m == 0 || m > 60 {
        return Err(Error::InvalidParameter(format!("m = {m} outside 1..=60")));
    }
    let m64 = m as u64;
    let mut total: i128 = 0;
    for j in 0..=m64 / 2 {
        let numerator = m64 as i128 * binomial(m64 - j, j);
        let denominator = (m64 - j) as i128;
        debug_assert_eq!(numerator % denominator, 0);
        let term = numerator / denominator * (1i128 << j);
        total += if (m64 - j).is_multiple_of(2) {
            term
        } else {
            -term
        };
    }
    Ok(-total as i64)
}

/// Lifted sum over GF(q^s) from the recursion
/// `k^{(s)} = -k^{(s-1)} k^{(1)} - q k^{(s-2)}` with `k^{(0)} = -2`.
pub fn kloosterman_lifted(field: &Gf2Field, s: u32, a: Gf2Element) -> i128 {
    let k1 = kloosterman(field, a) as i128;
    let q = field.size() as i128;
    let (mut prev, mut cur) = (-2i128, k1);
    if s == 0 {
        return prev;
    }
    if a.is_zero() {
        // The lift only holds for a != 0; the zero sum is -1 in every extension.
        return -1;
    }
    for _ in 1..s {
        let next = -cur * k1 - q * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Lifted sum over GF(q^s) evaluated directly in the extension field, with
/// `a` embedded from GF(q). `s = 0` returns the conventional seed `-2`.
pub fn kloosterman_lifted_direct(field: &Gf2Field, s: u32, a: Gf2Element) -> Result<i64> {
    if s == 0 {
        return Ok(-2);
    }
    let big_degree = field.degree() * s;
    if big_degree > MAX_LIFT_DEGREE {
        return Err(Error::Budget(format!(
            "extension degree {big_degree} > {MAX_LIFT_DEGREE}"
        )));
    }
    let big = Gf2Field::new(big_degree)?;
    let emb = field.embedding_into(&big)?;
    let a_big = emb.apply(&big, a);
    let inv = big.inverse_table();
    Ok(big
        .nonzero_elements()
        .map(|g| {
            let arg = big.add(big.mul(a_big, g), Gf2Element(inv[g.0 as usize]));
            sign(big.abs_trace(arg))
        })
        .sum())
}

/// Integers `t = -1 (mod 4)` with `|t| <= 2^{m/2 + 1}`.
pub fn lemma_value_set(m: u32) -> BTreeSet<i64> {
    let limit_sq = 1i128 << (m + 2);
    let r = (limit_sq as f64).sqrt().ceil() as i64 + 1;
    (-r..=r)
        .filter(|t| t.rem_euclid(4) == 3 && (*t as i128) * (*t as i128) <= limit_sq)
        .collect()
}

/// `|v| <= 2 sqrt(2^m)`, compared exactly as `v^2 <= 4 * 2^m`.
pub fn weil_bound(m: u32, v: i64) -> bool {
    (v as i128) * (v as i128) <= 1i128 << (m + 2)
}

/// `{k_m(a) : a in GF(2^m)}`.
pub fn kloosterman_value_set(m: u32) -> Result<BTreeSet<i64>> {
    if !(2..=12).contains(&m) {
        return Err(Error::Budget(format!(
            "value set supports 2 <= m <= 12, got {m}"
        )));
    }
    let field = Gf2Field::new(m)?;
    Ok(KloostermanTable::compute(&field)?.value_set())
}

/// Cached map `a -> k_m(a)` for every field element, indexed by `a.bits()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KloostermanTable {
    m: u32,
    modulus: u64,
    values: Vec<i64>,
}

impl KloostermanTable {
    /// Builds the table with a fast Walsh-Hadamard transform.
    ///
    /// `Tr(a x)` is the linear form `x -> <v_a, x>` with `v_a[i] = Tr(a x^i)`,
    /// so `k_m(a)` is the Walsh transform of `f(x) = (-1)^{Tr(1/x)}` (and
    /// `f(0) = 0`) evaluated at `v_a`.
    pub fn compute(field: &Gf2Field) -> Result<Self> {
        let m = field.degree();
        if m > MAX_TABLE_DEGREE {
            return Err(Error::Budget(format!(
                "table degree {m} > {MAX_TABLE_DEGREE}"
            )));
        }
        let q = field.size() as usize;
        let inv = field.inverse_table();
        let mut spectrum: Vec<i64> = (0..q)
            .map(|x| {
                if x == 0 {
                    0
                } else {
                    sign(field.abs_trace(Gf2Element(inv[x])))
                }
            })
            .collect();
        walsh_hadamard(&mut spectrum);
        let values = (0..q as u64)
            .into_par_iter()
            .map(|a| {
                let a = Gf2Element(a);
                let v = (0..m).fold(0usize, |acc, i| {
                    let t = field.abs_trace(field.mul(a, Gf2Element(1 << i)));
                    acc | ((t as usize) << i)
                });
                spectrum[v]
            })
            .collect();
        Ok(Self {
            m,
            modulus: field.modulus(),
            values,
        })
    }

    /// Builds the table by direct summation for every `a`.
    pub fn compute_direct(field: &Gf2Field) -> Result<Self> {
        let m = field.degree();
        if m > 12 {
            return Err(Error::Budget(format!("direct table degree {m} > 12")));
        }
        let inv = field.inverse_table();
        let tr_inv: Vec<u8> = (0..field.size())
            .map(|x| field.abs_trace(Gf2Element(inv[x as usize])))
            .collect();
        let values = (0..field.size())
            .into_par_iter()
            .map(|a| {
                (1..field.size())
                    .map(|x| {
                        let t = field.abs_trace(field.mul(Gf2Element(a), Gf2Element(x)));
                        sign(t ^ tr_inv[x as usize])
                    })
                    .sum()
            })
            .collect();
        Ok(Self {
            m,
            modulus: field.modulus(),
            values,
        })
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn get(&self, a: Gf2Element) -> i64 {
        self.values[a.0 as usize]
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn value_set(&self) -> BTreeSet<i64> {
        self.values.iter().copied().collect()
    }

    pub fn file_name(m: u32, modulus: u64) -> String {
        format!("kloosterman_m{m}_{modulus:x}.csv")
    }

    /// Writes `# m=<m> modulus=<hex>`, the header `a_bits,value`, then one
    /// row per element.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = fs::File::create(path)?;
        writeln!(out, "# m={} modulus={:#x}", self.m, self.modulus)?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["a_bits", "value"])?;
        for (a, v) in self.values.iter().enumerate() {
            w.write_record([a.to_string(), v.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv(path: &Path, field: &Gf2Field) -> Result<Self> {
        let mut reader = BufReader::new(fs::File::open(path)?);
        let mut first = String::new();
        reader.read_line(&mut first)?;
        let expected = format!("# m={} modulus={:#x}", field.degree(), field.modulus());
        if first.trim_end() != expected {
            return Err(Error::Malformed(format!(
                "cache header {:?} does not match {expected:?}",
                first.trim_end()
            )));
        }
        let mut r = csv::Reader::from_reader(reader);
        let mut values = vec![None; field.size() as usize];
        for row in r.records() {
            let row = row?;
            let parse = |i: usize| -> Result<i64> {
                row.get(i)
                    .and_then(|s| s.trim().parse().ok())
                    .ok_or_else(|| Error::Malformed(format!("bad row {row:?}")))
            };
            let a = parse(0)?;
            let slot = values
                .get_mut(a as usize)
                .filter(|_| a >= 0)
                .ok_or_else(|| Error::Malformed(format!("a_bits {a} out of range")))?;
            *slot = Some(parse(1)?);
        }
        let values = values
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Malformed("cache is missing rows".into()))?;
        Ok(Self {
            m: field.degree(),
            modulus: field.modulus(),
            values,
        })
    }

    /// Reads the cached table from `dir`, computing and storing it on a miss.
    pub fn load_or_compute(field: &Gf2Field, dir: &Path) -> Result<Self> {
        let path: PathBuf = dir.join(Self::file_name(field.degree(), field.modulus()));
        if path.exists() {
            if let Ok(t) = Self::read_csv(&path, field) {
                return Ok(t);
            }
        }
        let table = Self::compute(field)?;
        fs::create_dir_all(dir)?;
        table.write_csv(&path)?;
        Ok(table)
    }
}

/// In-place unnormalized Walsh-Hadamard transform.
pub(crate) fn walsh_hadamard(v: &mut [i64]) {
    let n = v.len();
    let mut h = 1;
    while h < n {
        for block in (0..n).step_by(2 * h) {
            for i in block..block + h {
                let (x, y) = (v[i], v[i + h]);
                v[i] = x + y;
                v[i + h] = x - y;
            }
        }
        h *= 2;
    }
}

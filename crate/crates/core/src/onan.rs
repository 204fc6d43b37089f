//! The mod-5 Selmer criterion for the twists `E15 (x) D`: admissibility,
//! the congruence `C3A(D) + h(D) = 0 (mod 5)`, and the conditional Sha
//! statement when the twisted central value is certifiably nonzero.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{is_fundamental, modulo};
use crate::elliptic::DEFAULT_PRIME_BOUND;
use crate::error::{Error, Result};
use crate::lfunc::{twisted_l_value, LValueReport};
use crate::modfun::{fon_mt_3a, McKayThompson3A, SeriesId, DEFAULT_MT_PREC};
use crate::quadforms::class_number;
use crate::singmod::{c3a_via_traces, DEFAULT_TOL};
use crate::DD;

/// A nonzero L-value is certified when it exceeds its tail bound this many times.
pub const L_SAFETY_FACTOR: f64 = 10.0;

const SCAN_CHUNK: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Admissibility {
    pub disc: i64,
    pub admissible: bool,
    /// Failed conditions, empty when admissible.
    pub reasons: Vec<String>,
}

/// `D < 0` fundamental with `D = 1 (mod 3)` and `D = 2, 3 (mod 5)`,
/// residues taken in `[0, m)`.
pub fn admissible(d: i64) -> Admissibility {
    let mut reasons = Vec::new();
    if d >= 0 {
        reasons.push(format!("{d} is not negative"));
    }
    if !is_fundamental(d) {
        reasons.push(format!("{d} is not a fundamental discriminant"));
    }
    let r3 = modulo(d, 3);
    if r3 != 1 {
        reasons.push(format!("{d} = {r3} (mod 3), need 1"));
    }
    let r5 = modulo(d, 5);
    if r5 != 2 && r5 != 3 {
        reasons.push(format!("{d} = {r5} (mod 5), need 2 or 3"));
    }
    Admissibility { disc: d, admissible: reasons.is_empty(), reasons }
}

pub fn is_admissible(d: i64) -> bool {
    admissible(d).admissible
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelmerOptions {
    /// Minimum precision of the 3A expansion; raised to `|D|/4 + 1` as needed.
    pub prec: i64,
    /// Rounding budget for the CM-trace route.
    pub tol: f64,
    /// Point-count prime bound in force for the build.
    pub prime_bound: u64,
    /// Recompute `C3A(D)` from traces of singular moduli and require agreement.
    pub cross_check: bool,
    pub with_lvalue: bool,
    /// Tolerance for the twisted central value.
    pub l_tol: f64,
}

impl Default for SelmerOptions {
    fn default() -> Self {
        SelmerOptions {
            prec: DEFAULT_MT_PREC,
            tol: DEFAULT_TOL,
            prime_bound: DEFAULT_PRIME_BOUND,
            cross_check: true,
            with_lvalue: false,
            l_tol: DEFAULT_TOL,
        }
    }
}

impl SelmerOptions {
    /// Expansion precision needed to read `C3A(D)` for every `D >= d_min`.
    pub fn prec_for(&self, d_min: i64) -> i64 {
        self.prec.max(-d_min / 4 + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShaStatement {
    /// `L(1) != 0`, and 5 divides `#Sha` exactly when the congruence holds.
    Applies {
        mod5_divides: bool,
    },
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelmerVerdict {
    #[serde(rename = "D")]
    pub disc: i64,
    pub admissible: bool,
    pub h: u64,
    #[serde(with = "bigint_string")]
    pub c3a_series: BigInt,
    #[serde(with = "opt_bigint_string")]
    pub c3a_traces: Option<BigInt>,
    /// `(C3A(D) + h(D)) mod 5` in `[0, 5)`.
    pub congruence: u8,
    pub sel5_nontrivial: bool,
    pub l_twist: Option<LValueReport>,
    pub sha_statement: ShaStatement,
    pub options: SelmerOptions,
}

impl SelmerVerdict {
    /// `C3A(D) + h(D)`.
    pub fn congruence_value(&self) -> BigInt {
        &self.c3a_series + BigInt::from(self.h)
    }

    /// `D=-8 admissible; h=1; C3A=-188; C3A+h=-187 ≡ 3 (mod 5); Sel5 trivial`.
    pub fn summary(&self) -> String {
        let sel = if self.sel5_nontrivial { "Sel5 nontrivial" } else { "Sel5 trivial" };
        let mut s = format!(
            "D={} admissible; h={}; C3A={}; C3A+h={} ≡ {} (mod 5); {sel}",
            self.disc,
            self.h,
            self.c3a_series,
            self.congruence_value(),
            self.congruence
        );
        if let Some(l) = &self.l_twist {
            s.push_str(&format!("; L(1)={:.10} (tail {:.1e})", l.value, l.tail_estimate));
        }
        match self.sha_statement {
            ShaStatement::Applies { mod5_divides: true } => s.push_str("; 5 | #Sha"),
            ShaStatement::Applies { mod5_divides: false } => s.push_str("; 5 does not divide #Sha"),
            ShaStatement::NotApplicable => {}
        }
        s
    }
}

/// Verdict for one `D`, computing the 3A expansion at the needed precision.
pub fn selmer_criterion(d: i64, opts: &SelmerOptions) -> Result<SelmerVerdict> {
    check_admissible(d)?;
    let mt = fon_mt_3a(opts.prec_for(d))?;
    selmer_with(d, opts, &mt)
}

fn check_admissible(d: i64) -> Result<()> {
    let a = admissible(d);
    if !a.admissible {
        return Err(Error::NotAdmissible { disc: d, reasons: a.reasons.join("; ") });
    }
    Ok(())
}

/// Verdict for one `D` using a precomputed 3A expansion.
pub fn selmer_with(d: i64, opts: &SelmerOptions, mt: &McKayThompson3A) -> Result<SelmerVerdict> {
    check_admissible(d)?;
    let h = class_number(d)?;
    let c3a_series = mt.coefficient(d)?;
    let c3a_traces = if opts.cross_check {
        let t = c3a_via_traces::<DD>(d, opts.tol)?;
        if t != c3a_series {
            return Err(Error::CrossCheckFailed { disc: d, series: c3a_series.to_string(), traces: t.to_string() });
        }
        Some(t)
    } else {
        None
    };
    let congruence = (&c3a_series + BigInt::from(h)).mod_floor(&BigInt::from(5)).to_u8().expect("residue mod 5");
    let sel5_nontrivial = congruence == 0;
    let l_twist = if opts.with_lvalue { Some(twisted_l_value(SeriesId::F15, d, opts.l_tol)?) } else { None };
    let sha_statement = match &l_twist {
        Some(l) if l.value.abs() > L_SAFETY_FACTOR * l.tail_estimate && l.value.abs() > opts.l_tol => {
            ShaStatement::Applies { mod5_divides: sel5_nontrivial }
        }
        _ => ShaStatement::NotApplicable,
    };
    Ok(SelmerVerdict {
        disc: d,
        admissible: true,
        h,
        c3a_series,
        c3a_traces,
        congruence,
        sel5_nontrivial,
        l_twist,
        sha_statement,
        options: *opts,
    })
}

/// Admissible `D` in `[d_min, d_max]`, from `d_max` downwards.
pub fn admissible_in(d_min: i64, d_max: i64) -> Vec<i64> {
    if d_min > d_max {
        return Vec::new();
    }
    (d_min..=d_max.min(-1)).rev().filter(|&d| is_admissible(d)).collect()
}

/// Verdicts for every admissible `D` in `[d_min, d_max]`, ordered by `|D|`.
pub fn scan(d_min: i64, d_max: i64, opts: &SelmerOptions) -> Result<Vec<SelmerVerdict>> {
    let mut out = Vec::new();
    scan_streaming(d_min, d_max, opts, &BTreeSet::new(), |v| {
        out.push(v.clone());
        Ok(())
    })?;
    Ok(out)
}

/// As [`scan`], skipping discriminants in `done` and handing each verdict
/// to `sink` in order as soon as its chunk finishes.
pub fn scan_streaming<F>(
    d_min: i64,
    d_max: i64,
    opts: &SelmerOptions,
    done: &BTreeSet<i64>,
    mut sink: F,
) -> Result<usize>
where
    F: FnMut(&SelmerVerdict) -> Result<()>,
{
    if d_max >= 0 {
        return Err(Error::InvalidArgument(format!("scan range must be negative, got upper end {d_max}")));
    }
    let todo: Vec<i64> = admissible_in(d_min, d_max).into_iter().filter(|d| !done.contains(d)).collect();
    let Some(&lowest) = todo.last() else {
        return Ok(0);
    };
    let mt = fon_mt_3a(opts.prec_for(lowest))?;
    let mut count = 0;
    for chunk in todo.chunks(SCAN_CHUNK) {
        let verdicts: Vec<Result<SelmerVerdict>> = chunk.par_iter().map(|&d| selmer_with(d, opts, &mt)).collect();
        for v in verdicts {
            sink(&v?)?;
            count += 1;
        }
    }
    Ok(count)
}

/// Attested coefficients `C15(D)` of the weight-3/2 cusp form for class 15AB.
pub const G15_TABLE: [(i64, i64); 4] = [(-3, 1), (-8, -2), (-15, -1), (-20, 2)];

pub fn g15_coeff(d: i64) -> Result<i64> {
    G15_TABLE.iter().find(|(k, _)| *k == d).map(|(_, v)| *v).ok_or(Error::UnknownCoefficient(d))
}

mod bigint_string {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

mod opt_bigint_string {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        match n {
            Some(n) => s.serialize_some(&n.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        Option::<String>::deserialize(d)?.map(|s| s.parse().map_err(D::Error::custom)).transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissibility() {
        assert!(is_admissible(-8));
        assert!(is_admissible(-68));
        let a = admissible(-11);
        assert!(!a.admissible);
        assert_eq!(a.reasons, vec!["-11 = 4 (mod 5), need 2 or 3"]);
        assert!(!is_admissible(-32));
        assert!(!is_admissible(7));
    }

    #[test]
    fn published_anchors() {
        let opts = SelmerOptions::default();
        let v8 = selmer_criterion(-8, &opts).unwrap();
        assert_eq!(v8.summary(), "D=-8 admissible; h=1; C3A=-188; C3A+h=-187 ≡ 3 (mod 5); Sel5 trivial");
        let v68 = selmer_criterion(-68, &opts).unwrap();
        assert_eq!(v68.h, 4);
        assert_eq!(v68.congruence_value(), BigInt::from(-15834140));
        assert_eq!(v68.congruence, 0);
        assert!(v68.sel5_nontrivial);
        assert!(matches!(selmer_criterion(-11, &opts), Err(Error::NotAdmissible { .. })));
    }

    #[test]
    fn sha_clause() {
        let opts = SelmerOptions { with_lvalue: true, ..Default::default() };
        let v8 = selmer_criterion(-8, &opts).unwrap();
        assert_eq!(v8.sha_statement, ShaStatement::Applies { mod5_divides: false });
        let v68 = selmer_criterion(-68, &opts).unwrap();
        assert_eq!(v68.l_twist.as_ref().unwrap().sign, 1);
        assert_eq!(v68.sha_statement, ShaStatement::NotApplicable);
    }

    #[test]
    fn scans() {
        let opts = SelmerOptions::default();
        let v = scan(-100, -1, &opts).unwrap();
        let ds: Vec<i64> = v.iter().map(|v| v.disc).collect();
        let oracle: Vec<i64> = (-100..0)
            .rev()
            .filter(|&d: &i64| {
                let squarefree = |m: i64| (2..).take_while(|p| p * p <= m.abs()).all(|p| m % (p * p) != 0);
                let fundamental =
                    d.rem_euclid(4) == 1 && squarefree(d) || matches!(d.rem_euclid(16), 8 | 12) && squarefree(d / 4);
                fundamental && d.rem_euclid(3) == 1 && matches!(d.rem_euclid(5), 2 | 3)
            })
            .collect();
        assert_eq!(ds, oracle);
        assert_eq!(&ds[..4], &[-8, -23, -47, -68]);
        assert!(!ds.contains(&-53));
        assert!(scan(-7, -1, &opts).unwrap().is_empty());
        assert_eq!(scan(-68, -68, &opts).unwrap().len(), 1);
        let json = serde_json::to_string(&v[0]).unwrap();
        assert!(json.contains("\"c3a_series\":\"-188\""), "{json}");
        assert_eq!(serde_json::from_str::<SelmerVerdict>(&json).unwrap(), v[0]);
    }

    #[test]
    fn g15_table() {
        assert_eq!(g15_coeff(-3).unwrap(), 1);
        assert_eq!(g15_coeff(-8).unwrap(), -2);
        assert_eq!(g15_coeff(-15).unwrap(), -1);
        assert_eq!(g15_coeff(-20).unwrap(), 2);
        assert!(matches!(g15_coeff(-7), Err(Error::UnknownCoefficient(_))));
    }
}

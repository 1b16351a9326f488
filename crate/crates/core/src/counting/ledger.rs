use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::value::{int_root_ceil, LedgerValue, Num};
use crate::degree::{embedding_dimension, factorial, VarietyInvariants};
use crate::{Error, Result};

/// Inputs of the constant ledger. The constants `c4, c5, c0, c', c8, c9,
/// c10` and the lower-dimensional constant are not known explicitly; every
/// derived value is conditional on them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LedgerInputs {
    pub g: u64,
    pub r: u64,
    pub d: u64,
    pub l: u64,
    pub rank: u64,
    /// Stand-in for the Faltings height of `A`.
    pub h_fal: f64,
    pub c4: f64,
    pub c5: f64,
    pub c0: f64,
    pub c_prime: f64,
    /// Constant of the counting bound for subvarieties of smaller
    /// dimension. For `dim X = 1` these are points and 1 is exact.
    pub c_lower: f64,
    pub c8: f64,
    pub c9: f64,
    pub c10: f64,
    /// Height of `X`, if known.
    pub h_x: Option<f64>,
    /// Largest height of a point of `X`, used to bound `h(X)` when `h_x`
    /// is absent.
    pub max_point_height: Option<f64>,
}

impl Default for LedgerInputs {
    fn default() -> Self {
        LedgerInputs {
            g: 2,
            r: 1,
            d: 1,
            l: 2,
            rank: 1,
            h_fal: 1.0,
            c4: 100.0,
            c5: 1e6,
            c0: 1e3,
            c_prime: 1e3,
            c_lower: 1.0,
            c8: 1.0,
            c9: 1.0,
            c10: 1.0,
            h_x: None,
            max_point_height: None,
        }
    }
}

impl LedgerInputs {
    pub fn invariants(&self) -> Result<VarietyInvariants> {
        VarietyInvariants::new(self.g, self.r, self.d, self.l)
    }

    fn positive(&self, name: &str, x: f64) -> Result<Num> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::ledger(format!("{name} must be positive and finite, got {x}")));
        }
        Num::from_f64(x)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub name: String,
    pub value: LedgerValue,
    pub tag: String,
    pub deps: Vec<String>,
}

/// Named constants in derivation order, each with the formula it comes
/// from and the names it was computed from.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ConstantLedger {
    pub entries: Vec<LedgerEntry>,
}

impl ConstantLedger {
    pub fn get(&self, name: &str) -> Result<&LedgerEntry> {
        self.entries
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| Error::ledger(format!("ledger has no entry {name:?}")))
    }

    pub fn num(&self, name: &str) -> Result<Num> {
        Ok(self.get(name)?.value.as_num())
    }

    pub fn integer(&self, name: &str) -> Result<BigInt> {
        match &self.get(name)?.value {
            LedgerValue::Integer { value } => Ok(value.clone()),
            other => Err(Error::ledger(format!("{name} is not an integer: {other}"))),
        }
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.iter().any(|e| e.name == name)
    }

    pub fn push(&mut self, name: &str, value: LedgerValue, tag: &str, deps: &[&str]) {
        debug_assert!(!self.contains(name), "duplicate ledger entry {name}");
        self.entries.push(LedgerEntry {
            name: name.to_string(),
            value,
            tag: tag.to_string(),
            deps: deps.iter().map(|s| s.to_string()).collect(),
        });
    }

    fn input(&mut self, name: &str, value: Num) {
        self.push(name, value.value(), "input", &[]);
    }
}

/// Smallest `M >= 0` with `(1 + 1/c4)^M >= c4`.
pub fn gap_exponent(c4: f64) -> Result<u64> {
    if !(c4 > 1.0) || !c4.is_finite() {
        return Err(Error::input(format!("c4 must be a finite number > 1, got {c4}")));
    }
    let f = |m: f64| m * (1.0 / c4).ln_1p() - c4.ln();
    let mut m = (c4.ln() / (1.0 / c4).ln_1p()).ceil().max(0.0);
    while m > 0.0 && f(m - 1.0) >= 0.0 {
        m -= 1.0;
    }
    while f(m) < 0.0 {
        m += 1.0;
    }
    Ok(m as u64)
}

fn cone_factor(c4: &Num, rank: u64) -> Num {
    Num::int(1).add(&Num::int(8).mul(c4).sqrt()).pow(rank as u32)
}

/// `ceil((1 + sqrt(8 c4))^rank · g · M · N')`.
pub fn large_point_bound_from(rank: u64, c4: f64, g: u64, m: u64, n_prime: &BigInt) -> Result<BigInt> {
    let c4 = Num::from_f64(c4)?;
    cone_factor(&c4, rank)
        .mul(&Num::int(g as i64))
        .mul(&Num::int(m as i64))
        .mul(&Num::big(n_prime.clone()))
        .ceil()
}

/// Bound on the number of large points, read from a ledger.
pub fn large_point_bound(ledger: &ConstantLedger) -> Result<BigInt> {
    ledger.integer("large point bound")
}

/// Bound on `h(X)` from a finite set of points of `X`:
/// `(l/g! + 1)^(r+1) · d · (max h + 3 log(l/g!))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeightXBound {
    pub prefactor: BigInt,
    pub log_coef: i64,
    #[serde(with = "crate::rational::serde_rational")]
    pub log_arg: BigRational,
    pub value: f64,
}

pub fn height_x_removal_bound(g: u64, r: u64, d: u64, l: u64, max_point_height: f64) -> Result<HeightXBound> {
    let gf = factorial(g);
    let lb = BigInt::from(l);
    if (&lb % &gf) != BigInt::zero() {
        return Err(Error::input(format!("g! = {gf} does not divide l = {l}")));
    }
    let u0 = lb / gf;
    let prefactor: BigInt = num_traits::pow(&u0 + 1, (r + 1) as usize) * d;
    let log_term = 3.0 * u0.to_f64().unwrap_or(f64::INFINITY).ln();
    let value = prefactor.to_f64().unwrap_or(f64::INFINITY) * (max_point_height + log_term);
    Ok(HeightXBound {
        prefactor,
        log_coef: 3,
        log_arg: BigRational::from_integer(u0),
        value,
    })
}

/// `min{ c3'' / max{1, 2 c3'/c1'}, c1'/2 }`.
pub fn merge_gap_constants(c1p: &Num, c3p: &Num, c3pp: &Num) -> Result<Num> {
    for (name, x) in [("c1'", c1p), ("c3'", c3p), ("c3''", c3pp)] {
        if !x.is_positive() {
            return Err(Error::input(format!("{name} must be positive")));
        }
    }
    let denom = Num::int(1).max(&Num::int(2).mul(c3p).div(c1p));
    Ok(c3pp.div(&denom).min(&c1p.div(&Num::int(2))))
}

/// Checks, in exact rational arithmetic, that a height exceeding both
/// `c1'·H - c3'` and `c3''` (with `H = max{1, hFal}`) exceeds `c1·H` for the
/// merged constant `c1`. Returns whether the implication held.
pub fn merge_gap_claim_check(c1p: f64, c3p: f64, c3pp: f64, h_fal: f64, hhat: f64) -> Result<bool> {
    let (c1p, c3p, c3pp) = (Num::from_f64(c1p)?, Num::from_f64(c3p)?, Num::from_f64(c3pp)?);
    let c1 = merge_gap_constants(&c1p, &c3p, &c3pp)?;
    let h = Num::int(1).max(&Num::from_f64(h_fal)?);
    let hhat = Num::from_f64(hhat)?;
    let outside_first = hhat.cmp_num(&c1p.mul(&h).sub(&c3p)).is_gt();
    let outside_second = hhat.cmp_num(&c3pp).is_gt();
    if !(outside_first && outside_second) {
        return Ok(true);
    }
    Ok(hhat.cmp_num(&c1.mul(&h)).is_gt())
}

/// Constants entering the final count.
#[derive(Clone, Debug, PartialEq)]
pub struct FinalInputs {
    pub rank: u64,
    pub c0: Num,
    pub c7: Num,
    pub c8: Num,
    pub c9: Num,
    pub c10: Num,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FinalCount {
    pub n_double_prime: LedgerValue,
    pub case_i_bound: LedgerValue,
    pub case_ii_bound: LedgerValue,
    pub c_final: LedgerValue,
    pub bound: LedgerValue,
}

struct FinalParts {
    n_dd: Num,
    case_i: Num,
    case_ii: Num,
    ball_factor: Num,
    c_final: Num,
    bound: Num,
}

fn final_parts(f: &FinalInputs) -> Result<FinalParts> {
    let e = (f.rank + 1) as u32;
    let n_dd = Num::big(f.c7.pow(e).ceil()?).add(&Num::int(1));
    let eight_c8 = Num::int(8).mul(&f.c8).add(&Num::int(1));
    let far = f.c10.pow(e);
    let case_i = n_dd.mul(&eight_c8.pow(f.rank as u32)).add(&far);
    let ball_factor = Num::int(1).add(&Num::int(2).mul(&Num::int(2).mul(&f.c9).mul(&f.c0).sqrt()));
    let case_ii = f.c0.mul(&ball_factor.pow(f.rank as u32)).add(&far);
    let c_final = Num::int(2).mul(
        &f.c7
            .add(&Num::int(1))
            .mul(&eight_c8)
            .max(&f.c0)
            .max(&ball_factor)
            .max(&f.c10),
    );
    let bound = c_final.pow(e);
    Ok(FinalParts {
        n_dd,
        case_i,
        case_ii,
        ball_factor,
        c_final,
        bound,
    })
}

/// `N'' = c7^(rank+1) + 1`, the two step-3 thresholds and
/// `c = 2 max{(c7+1)(8c8+1), c0, 1 + 2 sqrt(2 c9 c0), c10}` with the bound
/// `c^(rank+1)`.
pub fn final_count(f: &FinalInputs) -> Result<FinalCount> {
    let p = final_parts(f)?;
    Ok(FinalCount {
        n_double_prime: p.n_dd.value(),
        case_i_bound: p.case_i.value(),
        case_ii_bound: p.case_ii.value(),
        c_final: p.c_final.value(),
        bound: p.bound.value(),
    })
}

/// Final count read from a ledger built by [`build_ledger`].
pub fn final_count_certificate(ledger: &ConstantLedger) -> Result<FinalCount> {
    Ok(FinalCount {
        n_double_prime: ledger.get("N''")?.value.clone(),
        case_i_bound: ledger.get("step 3 case (i) bound")?.value.clone(),
        case_ii_bound: ledger.get("step 4 case (ii) bound")?.value.clone(),
        c_final: ledger.get("c")?.value.clone(),
        bound: ledger.get("final bound")?.value.clone(),
    })
}

const TAG_INPUT_ARITH: &str = "derived from inputs";

/// Every explicit constant of the four-step count, in derivation order.
pub fn build_ledger(inp: &LedgerInputs) -> Result<ConstantLedger> {
    let inv = inp.invariants()?;
    let mut led = ConstantLedger::default();
    let c4 = inp.positive("c4", inp.c4)?;
    if inp.c4 <= 1.0 {
        return Err(Error::ledger(format!("c4 must exceed 1, got {}", inp.c4)));
    }
    let c5 = inp.positive("c5", inp.c5)?;
    let c0 = inp.positive("c0", inp.c0)?;
    let c_prime = inp.positive("c'", inp.c_prime)?;
    let c_lower = inp.positive("c_lower", inp.c_lower)?;
    let c8 = inp.positive("c8", inp.c8)?;
    let c9 = inp.positive("c9", inp.c9)?;
    let c10 = inp.positive("c10", inp.c10)?;
    if !inp.h_fal.is_finite() {
        return Err(Error::ledger("hFal proxy must be finite"));
    }
    let h_fal = Num::from_f64(inp.h_fal)?;

    for (name, v) in [
        ("g", inp.g),
        ("r", inp.r),
        ("d", inp.d),
        ("l", inp.l),
        ("rank", inp.rank),
    ] {
        led.input(name, Num::int(v as i64));
    }
    led.input("hFal", h_fal.clone());
    for (name, v) in [
        ("c4", &c4),
        ("c5", &c5),
        ("c0", &c0),
        ("c'", &c_prime),
        ("c_lower", &c_lower),
        ("c8", &c8),
        ("c9", &c9),
        ("c10", &c10),
    ] {
        led.input(name, v.clone());
    }
    let g = inp.g;
    let rank = inp.rank;
    let e = (rank + 1) as u32;
    let d = Num::int(inp.d as i64);
    let pf = Num::big(inv.pfaffian());
    led.push("l/g!", pf.value(), "Pfaffian identity deg A = g!·Pf", &["l", "g"]);
    if let Ok(n) = embedding_dimension(g, inp.l) {
        led.push(
            "n",
            LedgerValue::integer(n),
            "projective embedding dimension l/g! - 1",
            &["l/g!"],
        );
    }
    let h_one = Num::int(1).max(&h_fal);
    led.push("max{1,hFal}", h_one.value(), TAG_INPUT_ARITH, &["hFal"]);

    // h(X): supplied, or bounded from the largest point height.
    let h_x = match (inp.h_x, inp.max_point_height) {
        (Some(h), _) => {
            led.input("h(X)", Num::from_f64(h)?);
            Some(Num::from_f64(h)?)
        }
        (None, Some(mh)) => {
            let b = height_x_removal_bound(g, inp.r, inp.d, inp.l, mh)?;
            led.input("max point height", Num::from_f64(mh)?);
            led.push(
                "h(X)",
                LedgerValue::Real { value: b.value },
                "h(X) removal: (l/g!+1)^(r+1)·d·(max h + 3 log(l/g!))",
                &["l/g!", "r", "d", "max point height"],
            );
            Some(Num::Approx(b.value))
        }
        (None, None) => None,
    };

    // Step 1: large points.
    let m = gap_exponent(inp.c4)?;
    led.push(
        "M",
        LedgerValue::integer(m),
        "smallest M with (1+1/c4)^M >= c4",
        &["c4"],
    );
    let n_prime = Num::big(d.pow((2 * g) as u32).mul(&c_lower.pow(e)).ceil()?).add(&Num::int(1));
    led.push(
        "N'",
        n_prime.value(),
        "step 1: N' = d^(2g)·c_lower^(rank+1) + 1",
        &["d", "g", "c_lower", "rank"],
    );
    let n_prime_int = n_prime.ceil()?;
    let cone_bound = crate::packing::cone_count_bound(rank as usize, inp.c4);
    led.push(
        "cone count",
        LedgerValue::integer(cone_bound),
        "step 1: cone count floor((1+sqrt(8 c4))^rank)",
        &["c4", "rank"],
    );
    let run_bound = BigInt::from(g) * m * &n_prime_int;
    led.push(
        "run bound",
        LedgerValue::integer(run_bound),
        "step 1: large points per cone < g·M·N'",
        &["g", "M", "N'"],
    );
    let large = large_point_bound_from(rank, inp.c4, g, m, &n_prime_int)?;
    let c6 = int_root_ceil(&large, e);
    led.push(
        "large point bound",
        LedgerValue::integer(large),
        "step 1: (1+sqrt(8 c4))^rank·g·M·N'",
        &["c4", "rank", "g", "M", "N'"],
    );
    led.push(
        "c6",
        LedgerValue::integer(c6),
        "step 1: c6^(rank+1) >= large point bound",
        &["large point bound"],
    );
    let mut large_deps = vec!["c5", "max{1,hFal}"];
    let mut base = h_one.clone();
    if let Some(hx) = &h_x {
        base = base.max(hx);
        large_deps.push("h(X)");
    }
    let threshold = c5.mul(&base);
    led.push(
        "large height threshold",
        threshold.value(),
        "step 1: large means height >= c5·max{1, h(X), hFal}",
        &large_deps,
    );

    // Steps 2-4: small points.
    let c7 = pf.mul(&d.pow(2)).mul(&c_lower);
    led.push(
        "c7",
        c7.value(),
        "step 2: c7 = (l d^2/g!)·c_lower",
        &["l/g!", "d", "c_lower"],
    );
    let parts = final_parts(&FinalInputs {
        rank,
        c0: c0.clone(),
        c7: c7.clone(),
        c8: c8.clone(),
        c9: c9.clone(),
        c10: c10.clone(),
    })?;
    led.push(
        "N''",
        parts.n_dd.value(),
        "step 2: N'' = c7^(rank+1) + 1",
        &["c7", "rank"],
    );
    led.push("c11", c8.value(), "step 2: c11 = c8", &["c8"]);
    let far = c10.pow(e);
    led.push(
        "far point bound",
        far.value(),
        "step 3: at most c10^(rank+1) points far from Q",
        &["c10", "rank"],
    );
    led.push(
        "step 3 case (i) bound",
        parts.case_i.value(),
        "step 3 case (i): N''(8c8+1)^rank + c10^(rank+1)",
        &["N''", "c8", "rank", "far point bound"],
    );
    let r2 = Num::int(2).mul(&c9).mul(&h_one);
    led.push(
        "R^2",
        r2.value(),
        "step 3 case (ii): R^2 = 2 c9 max{1,hFal}",
        &["c9", "max{1,hFal}"],
    );
    let r0_2 = h_one.div(&c0);
    led.push(
        "R0^2",
        r0_2.value(),
        "step 4: R0^2 = max{1,hFal}/c0",
        &["c0", "max{1,hFal}"],
    );
    led.push(
        "ball factor",
        parts.ball_factor.value(),
        "step 4: 1 + 2 sqrt(2 c9 c0)",
        &["c9", "c0"],
    );
    let balls = parts.ball_factor.pow(rank as u32);
    led.push(
        "ball count",
        balls.value(),
        "step 4: (1+2R/R0)^rank balls",
        &["ball factor", "rank"],
    );
    led.push(
        "points per ball",
        c0.pow(e).value(),
        "step 4: at most c0^(rank+1) points per ball",
        &["c0", "rank"],
    );
    led.push(
        "step 4 case (ii) bound",
        parts.case_ii.value(),
        "step 4: c0(1+2 sqrt(2 c9 c0))^rank + c10^(rank+1)",
        &["c0", "ball count", "far point bound"],
    );
    led.push(
        "c",
        parts.c_final.value(),
        "final: c = 2 max{(c7+1)(8c8+1), c0, 1+2 sqrt(2 c9 c0), c10}",
        &["c7", "c8", "c0", "ball factor", "c10"],
    );
    led.push("final bound", parts.bound.value(), "final: c^(rank+1)", &["c", "rank"]);
    let c_gen = parts.c_final.pow(2);
    led.push(
        "c (generated)",
        c_gen.value(),
        "reduction to generated subvarieties: c^2",
        &["c"],
    );
    Ok(led)
}

/// Per-dimension inputs of the induction on `dim X`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimConstants {
    pub c1p: f64,
    pub c3p: f64,
    pub c3pp: f64,
    pub c2p: f64,
    pub c2pp: f64,
}

impl Default for DimConstants {
    fn default() -> Self {
        DimConstants {
            c1p: 1.0,
            c3p: 1.0,
            c3pp: 1.0,
            c2p: 1.0,
            c2pp: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InductionInputs {
    pub rank: u64,
    /// `c0` for points.
    pub base_c0: f64,
    /// Entry `k` holds the constants for `dim X = k + 1`.
    pub per_dim: Vec<DimConstants>,
    pub c7: f64,
    pub c8: f64,
    pub c9: f64,
    pub c10: f64,
}

impl Default for InductionInputs {
    fn default() -> Self {
        InductionInputs {
            rank: 1,
            base_c0: 1.0,
            per_dim: vec![DimConstants::default()],
            c7: 1.0,
            c8: 1.0,
            c9: 1.0,
            c10: 1.0,
        }
    }
}

/// Runs the induction on `dim X`: for each dimension the two gap constants
/// merge into `c1`, the two count constants into `c2`, and
/// `c0 = max{c1, c3}` with `c3 = max{c2, c†}^3`, `c†` the largest `c0` of
/// smaller dimension. Entries are suffixed with `[dim]`.
pub fn hyp_pack_induction(inp: &InductionInputs) -> Result<ConstantLedger> {
    let mut led = ConstantLedger::default();
    let pos = |name: &str, x: f64| -> Result<Num> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::ledger(format!("{name} must be positive and finite, got {x}")));
        }
        Num::from_f64(x)
    };
    let base = pos("c0[0]", inp.base_c0)?;
    let c7 = pos("c7", inp.c7)?;
    let c8 = pos("c8", inp.c8)?;
    let c9 = pos("c9", inp.c9)?;
    let c10 = pos("c10", inp.c10)?;
    led.input("rank", Num::int(inp.rank as i64));
    for (n, v) in [("c7", &c7), ("c8", &c8), ("c9", &c9), ("c10", &c10)] {
        led.input(n, v.clone());
    }
    led.input("c0[0]", base.clone());
    let mut c_dagger = base;
    for (k, dc) in inp.per_dim.iter().enumerate() {
        let dim = k + 1;
        let nm = |s: &str| format!("{s}[{dim}]");
        let c1p = pos(&nm("c1'"), dc.c1p)?;
        let c3p = pos(&nm("c3'"), dc.c3p)?;
        let c3pp = pos(&nm("c3''"), dc.c3pp)?;
        let c2p = pos(&nm("c2'"), dc.c2p)?;
        let c2pp = pos(&nm("c2''"), dc.c2pp)?;
        for (n, v) in [
            ("c1'", &c1p),
            ("c3'", &c3p),
            ("c3''", &c3pp),
            ("c2'", &c2p),
            ("c2''", &c2pp),
        ] {
            led.input(&nm(n), v.clone());
        }
        let c1 = merge_gap_constants(&c1p, &c3p, &c3pp)?;
        let (s1p, s3p, s3pp) = (nm("c1'"), nm("c3'"), nm("c3''"));
        led.push(
            &nm("c1"),
            c1.value(),
            "merged gap constant min{c3''/max{1, 2c3'/c1'}, c1'/2}",
            &[&s1p, &s3p, &s3pp],
        );
        let c2 = c2p.max(&c2pp);
        let (s2p, s2pp) = (nm("c2'"), nm("c2''"));
        led.push(&nm("c2"), c2.value(), "count constant max{c2', c2''}", &[&s2p, &s2pp]);
        let dagger_name = nm("c†");
        let prev: Vec<String> = (0..dim).map(|j| format!("c0[{j}]")).collect();
        let prev_refs: Vec<&str> = prev.iter().map(|s| s.as_str()).collect();
        led.push(
            &dagger_name,
            c_dagger.value(),
            "largest c0 of smaller dimension",
            &prev_refs,
        );
        let c3 = c2.max(&c_dagger).pow(3);
        let s2 = nm("c2");
        led.push(&nm("c3"), c3.value(), "c3 = max{c2, c†}^3", &[&s2, &dagger_name]);
        let c0 = c1.max(&c3);
        let (s1, s3) = (nm("c1"), nm("c3"));
        led.push(&format!("c0[{dim}]"), c0.value(), "c0 = max{c1, c3}", &[&s1, &s3]);
        let c0_inv = Num::int(1).div(&c1).max(&c3);
        led.push(
            &nm("c0 (1/c1 variant)"),
            c0_inv.value(),
            "alternative c0 = max{1/c1, c3}; not used downstream",
            &[&s1, &s3],
        );
        let parts = final_parts(&FinalInputs {
            rank: inp.rank,
            c0: c0.clone(),
            c7: c7.clone(),
            c8: c8.clone(),
            c9: c9.clone(),
            c10: c10.clone(),
        })?;
        let c0_name = format!("c0[{dim}]");
        led.push(
            &nm("c"),
            parts.c_final.value(),
            "final: c = 2 max{(c7+1)(8c8+1), c0, 1+2 sqrt(2 c9 c0), c10}",
            &["c7", "c8", &c0_name, "c9", "c10"],
        );
        let sc = nm("c");
        led.push(
            &nm("final bound"),
            parts.bound.value(),
            "final: c^(rank+1)",
            &[&sc, "rank"],
        );
        led.push(
            &nm("c (generated)"),
            parts.c_final.pow(2).value(),
            "reduction to generated subvarieties: c^2",
            &[&sc],
        );
        c_dagger = c_dagger.max(&c0);
    }
    Ok(led)
}

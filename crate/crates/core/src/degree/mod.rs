//! Exact degree bookkeeping: product and sum degrees, the bound for the
//! abelian subvariety generated by `X - X`, polarization types, isogeny
//! transport and the recursive covering-degree bound.

mod smith;
mod symplectic;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::format_rational;
use crate::{Error, Result};

pub use smith::smith_invariants;
pub use symplectic::{
    block_form, symplectic_normal_form, symplectic_reduction, AlternatingForm, PolarizationType, SymplecticReduction,
};

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn pow2(e: u64) -> BigInt {
    BigInt::one() << e
}

/// `(g, r = dim X, d = deg X, l = deg A)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarietyInvariants {
    pub g: u64,
    pub r: u64,
    pub d: u64,
    pub l: u64,
}

impl VarietyInvariants {
    pub fn new(g: u64, r: u64, d: u64, l: u64) -> Result<Self> {
        let inv = VarietyInvariants { g, r, d, l };
        inv.validate()?;
        Ok(inv)
    }

    pub fn validate(&self) -> Result<()> {
        if self.g == 0 {
            return Err(Error::input("g must be >= 1"));
        }
        if self.r > self.g {
            return Err(Error::input(format!("dim X = {} exceeds g = {}", self.r, self.g)));
        }
        if self.d == 0 || self.l == 0 {
            return Err(Error::input("degrees must be >= 1"));
        }
        deg_u0(self.g, self.l).map(|_| ())
    }

    /// `l / g!`.
    pub fn pfaffian(&self) -> BigInt {
        BigInt::from(self.l) / factorial(self.g)
    }
}

/// `C(dimY + dimY', dimY) · degY · degY'`.
pub fn product_degree(dim_y: u64, dim_y2: u64, deg_y: &BigInt, deg_y2: &BigInt) -> BigInt {
    binomial(dim_y + dim_y2, dim_y) * deg_y * deg_y2
}

/// `2^(dimY + dimY') · C(dimY + dimY', dimY) · degY · degY'`.
pub fn minkowski_sum_degree_bound(dim_y: u64, dim_y2: u64, deg_y: &BigInt, deg_y2: &BigInt) -> BigInt {
    pow2(dim_y + dim_y2) * product_degree(dim_y, dim_y2, deg_y, deg_y2)
}

/// Closed-form bound for the degree of a `k`-fold sum of `X - X`:
/// `2^((2^(k+1) - 2) r) · C(2r, r) · Π_{j=2..k} C(jr, 2r) · d^(2k)`.
pub fn generated_subvariety_bound(g: u64, r: u64, d: u64, k: u64) -> Result<BigInt> {
    if k == 0 || k > g || r == 0 || r > g {
        return Err(Error::input(format!(
            "need 1 <= k <= g and 1 <= r <= g, got g={g} r={r} k={k}"
        )));
    }
    let exp = ((1u64 << (k + 1)) - 2) * r;
    let mut acc = pow2(exp) * binomial(2 * r, r);
    for j in 2..=k {
        acc *= binomial(j * r, 2 * r);
    }
    Ok(acc * BigInt::from(d).pow(2 * k as u32))
}

/// The same degree bound obtained by iterating the Minkowski-sum bound:
/// `D_1 = deg(X - X)`, `D_j = bound(X - X, (j-1)-fold sum)` with the
/// `(j-1)`-fold sum of dimension at most `2(j-1)r`.
pub fn generated_subvariety_chain_bound(g: u64, r: u64, d: u64, k: u64) -> Result<BigInt> {
    generated_subvariety_bound(g, r, d, k)?;
    let d = BigInt::from(d);
    let first = minkowski_sum_degree_bound(r, r, &d, &d);
    let mut acc = first.clone();
    for j in 2..=k {
        acc = minkowski_sum_degree_bound(2 * r, 2 * (j - 1) * r, &first, &acc);
    }
    Ok(acc)
}

/// `max_{k <= g}` of the closed-form bound, the constant multiplying
/// `d^(2g)` once `d >= 1`.
pub fn generated_subvariety_max_bound(g: u64, r: u64, d: u64) -> Result<BigInt> {
    let mut best = BigInt::zero();
    for k in 1..=g {
        best = best.max(generated_subvariety_bound(g, r, d, k)?);
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PfaffianIdentities {
    pub pf: BigInt,
    pub h0_dim: BigInt,
    pub deg_a: BigInt,
}

/// `Pf = Π d_i`, `dim H^0 = Pf`, `deg A = g! · Pf`.
pub fn pfaffian_identities(g: u64, d: &PolarizationType) -> Result<PfaffianIdentities> {
    if d.len() as u64 != g {
        return Err(Error::input(format!(
            "polarization type of length {} for g = {g}",
            d.len()
        )));
    }
    let pf = d.pfaffian();
    Ok(PfaffianIdentities {
        h0_dim: pf.clone(),
        deg_a: factorial(g) * &pf,
        pf,
    })
}

/// `coef · log(arg)` with rational coefficient and argument.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogTerm {
    #[serde(with = "crate::rational::serde_rational")]
    pub coef: BigRational,
    #[serde(with = "crate::rational::serde_rational")]
    pub arg: BigRational,
}

impl LogTerm {
    pub fn value(&self) -> f64 {
        crate::rational::to_f64(&self.coef) * crate::rational::to_f64(&self.arg).ln()
    }
}

impl std::fmt::Display for LogTerm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}·log({})", format_rational(&self.coef), format_rational(&self.arg))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsogenyTransport {
    pub deg_u0: BigInt,
    pub deg_u: BigInt,
    pub d_prime_bound: BigInt,
    pub faltings_shift: LogTerm,
}

fn deg_u0(g: u64, l: u64) -> Result<BigInt> {
    let gf = factorial(g);
    let l = BigInt::from(l);
    if !l.is_multiple_of(&gf) {
        return Err(Error::input(format!("g! = {gf} does not divide l = {l}")));
    }
    Ok(l / gf)
}

/// Degree changes along the isogeny to a principally polarized variety:
/// `deg u0 = l/g!`, `deg u = (l/g!)^(2g-1)`, `d' <= d (l/g!)^(2g-1)` and a
/// Faltings height shift of at most `½ log(l/g!)`.
pub fn isogeny_degree_transport(g: u64, d: u64, l: u64) -> Result<IsogenyTransport> {
    if g == 0 {
        return Err(Error::input("g must be >= 1"));
    }
    let u0 = deg_u0(g, l)?;
    let deg_u = u0.pow((2 * g - 1) as u32);
    Ok(IsogenyTransport {
        d_prime_bound: BigInt::from(d) * &deg_u,
        deg_u,
        faltings_shift: LogTerm {
            coef: BigRational::new(1.into(), 2.into()),
            arg: BigRational::from_integer(u0.clone()),
        },
        deg_u0: u0,
    })
}

/// `l/g! - 1`, the dimension of the projective space receiving `A`.
pub fn embedding_dimension(g: u64, l: u64) -> Result<BigInt> {
    let u0 = deg_u0(g, l)?;
    if u0 < BigInt::from(2) {
        return Err(Error::input(format!(
            "l/g! = {u0} < 2: the line bundle gives no projective embedding"
        )));
    }
    Ok(u0 - 1)
}

/// Recursive degree bound for the covering procedure on `X^M`:
/// `c(1) = degZ`, and for `M >= 2`
/// `c(M) = max(c(M-1, ·, ·, m·degZ·degX^(M-1)), degX·degZ + degZ)` with
/// `m = ((M-1) dimX)! / (dimX!)^(M-1)`.
pub fn nogaalon_degree_bound(m: u64, dim_x: u64, deg_x: &BigInt, deg_z: &BigInt) -> Result<BigInt> {
    if m == 0 {
        return Err(Error::input("M must be >= 1"));
    }
    if deg_x < &BigInt::one() || deg_z < &BigInt::one() {
        return Err(Error::input("degrees must be >= 1"));
    }
    Ok(nogaalon_rec(m, dim_x, deg_x, deg_z.clone()))
}

fn nogaalon_rec(m: u64, dim_x: u64, deg_x: &BigInt, deg_z: BigInt) -> BigInt {
    if m == 1 {
        return deg_z;
    }
    let multinom = factorial((m - 1) * dim_x) / factorial(dim_x).pow((m - 1) as u32);
    let z1 = multinom * &deg_z * deg_x.pow((m - 1) as u32);
    let branch_two = deg_x * &deg_z + &deg_z;
    nogaalon_rec(m - 1, dim_x, deg_x, z1).max(branch_two)
}

/// One exported degree quantity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeEntry {
    pub name: String,
    pub value: String,
    pub lemma_tag: String,
}

fn entry(name: &str, value: impl ToString, tag: &str) -> DegreeEntry {
    DegreeEntry {
        name: name.into(),
        value: value.to_string(),
        lemma_tag: tag.into(),
    }
}

/// Every degree quantity derivable from `(g, r, d, l)`.
pub fn degree_ledger(inv: &VarietyInvariants) -> Result<Vec<DegreeEntry>> {
    inv.validate()?;
    let d = BigInt::from(inv.d);
    let mut out = vec![
        entry(
            "deg(X x X)",
            product_degree(inv.r, inv.r, &d, &d),
            "degree of a product",
        ),
        entry(
            "deg(X - X)",
            minkowski_sum_degree_bound(inv.r, inv.r, &d, &d),
            "degree of a Minkowski sum",
        ),
    ];
    if inv.r >= 1 {
        for k in 1..=inv.g {
            out.push(entry(
                &format!("deg(sum of {k} copies of X - X)"),
                generated_subvariety_bound(inv.g, inv.r, inv.d, k)?,
                "generated abelian subvariety (closed form)",
            ));
        }
        out.push(entry(
            "deg A' bound",
            generated_subvariety_max_bound(inv.g, inv.r, inv.d)?,
            "generated abelian subvariety (max over k <= g)",
        ));
    }
    let t = isogeny_degree_transport(inv.g, inv.d, inv.l)?;
    out.push(entry("Pf(L) = l/g!", &t.deg_u0, "Pfaffian identity"));
    out.push(entry("deg u0", &t.deg_u0, "isogeny to a principal polarization"));
    out.push(entry("deg u", &t.deg_u, "isogeny degree transport"));
    out.push(entry("d' bound", &t.d_prime_bound, "isogeny degree transport"));
    out.push(entry(
        "Faltings height shift",
        &t.faltings_shift,
        "Faltings height under isogeny",
    ));
    match embedding_dimension(inv.g, inv.l) {
        Ok(n) => out.push(entry("embedding dimension n", n, "projective embedding dimension")),
        Err(_) => out.push(entry(
            "embedding dimension n",
            "undefined (l/g! < 2)",
            "projective embedding dimension",
        )),
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn binomials_and_factorials() {
        assert_eq!(binomial(4, 2), b(6));
        assert_eq!(binomial(0, 0), b(1));
        assert_eq!(binomial(3, 5), b(0));
        assert_eq!(factorial(5), b(120));
        assert_eq!(binomial(60, 30), "118264581564861424".parse().unwrap());
    }

    #[test]
    fn product_and_sum_examples() {
        assert_eq!(product_degree(1, 1, &b(3), &b(7)), b(42));
        assert_eq!(product_degree(0, 4, &b(3), &b(7)), b(21));
        assert_eq!(product_degree(2, 2, &b(3), &b(5)), b(90));
        assert_eq!(minkowski_sum_degree_bound(1, 1, &b(1), &b(1)), b(8));
        assert_eq!(minkowski_sum_degree_bound(0, 0, &b(4), &b(9)), b(36));
        assert_eq!(minkowski_sum_degree_bound(1, 2, &b(2), &b(3)), b(144));
    }

    #[test]
    fn generated_subvariety_examples() {
        assert_eq!(generated_subvariety_bound(2, 1, 1, 1).unwrap(), b(8));
        assert_eq!(generated_subvariety_bound(2, 1, 1, 2).unwrap(), b(128));
        let ratio = generated_subvariety_bound(3, 2, 6, 3).unwrap() / generated_subvariety_bound(3, 2, 3, 3).unwrap();
        assert_eq!(ratio, b(64));
        assert!(generated_subvariety_bound(2, 1, 1, 3).is_err());
    }

    #[test]
    fn chain_agrees_at_one_copy_and_exceeds_closed_form_after() {
        for r in 1..=3 {
            for d in 1..=4 {
                assert_eq!(
                    generated_subvariety_chain_bound(3, r, d, 1).unwrap(),
                    generated_subvariety_bound(3, r, d, 1).unwrap()
                );
            }
        }
        assert_eq!(generated_subvariety_chain_bound(2, 1, 1, 2).unwrap(), b(6144));
    }

    #[test]
    fn pfaffian_examples() {
        let pt = |v: &[i64]| PolarizationType::new(v.iter().map(|&x| b(x)).collect()).unwrap();
        assert_eq!(pfaffian_identities(2, &pt(&[1, 1])).unwrap().deg_a, b(2));
        let one = pfaffian_identities(1, &pt(&[3])).unwrap();
        assert_eq!((one.h0_dim, one.deg_a), (b(3), b(3)));
        let three = pfaffian_identities(3, &pt(&[1, 2, 4])).unwrap();
        assert_eq!((three.pf, three.deg_a), (b(8), b(48)));
        assert!(pfaffian_identities(2, &pt(&[3])).is_err());
    }

    #[test]
    fn isogeny_examples() {
        let t = isogeny_degree_transport(3, 7, 6).unwrap();
        assert_eq!((t.deg_u0, t.d_prime_bound.clone()), (b(1), b(7)));
        assert_eq!(t.faltings_shift.value(), 0.0);
        let t = isogeny_degree_transport(2, 1, 4).unwrap();
        assert_eq!((t.deg_u0, t.deg_u, t.d_prime_bound), (b(2), b(8), b(8)));
        assert_eq!(isogeny_degree_transport(1, 5, 6).unwrap().d_prime_bound, b(30));
        assert!(isogeny_degree_transport(2, 1, 3).is_err());
        assert_eq!(t.faltings_shift.to_string(), "1/2·log(2)");
    }

    #[test]
    fn embedding_examples() {
        assert_eq!(embedding_dimension(1, 3).unwrap(), b(2));
        assert_eq!(embedding_dimension(2, 8).unwrap(), b(3));
        assert!(embedding_dimension(1, 1).is_err());
    }

    #[test]
    fn nogaalon_examples() {
        assert_eq!(nogaalon_degree_bound(1, 3, &b(5), &b(7)).unwrap(), b(7));
        assert_eq!(nogaalon_degree_bound(2, 1, &b(1), &b(1)).unwrap(), b(2));
        // dimX = 0: multinomial is 1, so Z1 has degree degZ·degX^(M-1)
        assert_eq!(nogaalon_degree_bound(2, 0, &b(3), &b(2)).unwrap(), b(8));
    }

    #[test]
    fn ledger_lists_everything() {
        let inv = VarietyInvariants::new(2, 1, 3, 4).unwrap();
        let l = degree_ledger(&inv).unwrap();
        assert!(l.iter().any(|e| e.name == "d' bound" && e.value == "24"));
        assert!(VarietyInvariants::new(2, 3, 1, 2).is_err());
        assert!(VarietyInvariants::new(3, 1, 1, 4).is_err());
    }
}

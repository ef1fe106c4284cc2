//! Hurwitz and Deuring-Shafarevich arithmetic, ramification filtrations and
//! Artin-Schreier covers `y^2 + y = f(x)` of the projective line.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::poly::Poly;

/// `d = sum (|G^(i)| - 1)`.
pub fn different_exponent(filtration: &[u128]) -> u128 {
    filtration.iter().map(|&g| g.saturating_sub(1)).sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShortOrbit {
    pub size: u128,
    pub filtration: Vec<u128>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamificationProfile {
    #[serde(rename = "G")]
    pub group_order: u128,
    #[serde(rename = "g_quot")]
    pub quotient_genus: u64,
    pub orbits: Vec<ShortOrbit>,
}

impl RamificationProfile {
    pub fn validate(&self) -> Result<()> {
        if self.group_order == 0 {
            return Err(Error::InvalidProfile("group order 0".into()));
        }
        for o in &self.orbits {
            let fl = &o.filtration;
            let bad = |msg: &str| {
                Err(Error::InvalidProfile(format!(
                    "orbit of size {}: {msg}",
                    o.size
                )))
            };
            if fl.is_empty() || fl.contains(&0) {
                return bad("empty filtration or zero entry");
            }
            if fl.windows(2).any(|w| w[1] > w[0] || w[0] % w[1] != 0) {
                return bad("filtration must be a non-increasing chain of divisors");
            }
            if fl.len() > 1 && !fl[1].is_power_of_two() {
                return bad("first higher ramification group is not a 2-group");
            }
            if o.size == 0 || !self.group_order.is_multiple_of(o.size * fl[0]) {
                return bad("orbit size times stabilizer order must divide |G|");
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: RamificationProfile = serde_json::from_str(text)?;
        p.validate()?;
        Ok(p)
    }
}

fn genus_from_twice(twice_g_minus_2: i128) -> Result<u64> {
    if twice_g_minus_2 % 2 != 0 {
        return Err(Error::NonIntegral(format!(
            "2g - 2 = {twice_g_minus_2} is odd"
        )));
    }
    let g = twice_g_minus_2 / 2 + 1;
    if g < 0 {
        return Err(Error::NegativeGenus(g));
    }
    Ok(g as u64)
}

/// `2g - 2 = |G|(2g' - 2) + sum over orbits of size * d`.
pub fn hurwitz_genus(p: &RamificationProfile) -> Result<u64> {
    p.validate()?;
    let mut total = p.group_order as i128 * (2 * p.quotient_genus as i128 - 2);
    for o in &p.orbits {
        total += o.size as i128 * different_exponent(&o.filtration) as i128;
    }
    genus_from_twice(total)
}

/// Tame form: `2g - 2 = |G|(2g' - 2) + sum (|G| - l_i)` over short orbit sizes `l_i`.
pub fn hurwitz_genus_tame(
    group_order: u128,
    quotient_genus: u64,
    short_orbits: &[u128],
) -> Result<u64> {
    let g = group_order as i128;
    let mut total = g * (2 * quotient_genus as i128 - 2);
    for &l in short_orbits {
        if l == 0 || !group_order.is_multiple_of(l) {
            return Err(Error::InvalidProfile(format!(
                "orbit size {l} does not divide {group_order}"
            )));
        }
        total += g - l as i128;
    }
    genus_from_twice(total)
}

/// `gamma - 1 = |S|(gamma' - 1) + sum (|S| - l_i)` for a 2-group `S`.
pub fn deuring_shafarevich(
    group_order: u128,
    gamma_quotient: u64,
    short_orbits: &[u128],
) -> Result<u64> {
    if !group_order.is_power_of_two() {
        return Err(Error::NotPGroup(group_order));
    }
    let s = group_order as i128;
    let mut gamma = 1 + s * (gamma_quotient as i128 - 1);
    for &l in short_orbits {
        if l == 0 || !group_order.is_multiple_of(l) {
            return Err(Error::InvalidProfile(format!(
                "orbit size {l} does not divide {group_order}"
            )));
        }
        gamma += s - l as i128;
    }
    if gamma < 0 {
        return Err(Error::NegativeGenus(gamma));
    }
    Ok(gamma as u64)
}

/// Genus of the quotient by an odd-order group `h` with `fixed` fixed points
/// and all other orbits long: `2g - 2 = h(2g' - 2) + fixed (h - 1)`.
pub fn quotient_genus_tame(g_top: u64, h: u64, fixed: u64) -> Result<u64> {
    if h == 0 || h.is_multiple_of(2) {
        return Err(Error::InvalidProfile(format!(
            "quotient order {h} must be odd"
        )));
    }
    let rest = 2 * g_top as i128 - 2 - fixed as i128 * (h as i128 - 1);
    if rest % h as i128 != 0 {
        return Err(Error::NonIntegral(format!(
            "{rest} is not divisible by {h}"
        )));
    }
    genus_from_twice(rest / h as i128)
}

/// Rational function `num / den` over F_{2^e}, in lowest terms with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ASCover {
    pub base_field: FieldSpec,
    pub num: Poly,
    pub den: Poly,
    pub reduced: bool,
}

/// A pole of `f`: `place` is `None` for infinity or the monic irreducible polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pole {
    pub place: Option<Poly>,
    pub degree: u32,
    pub order: u64,
}

impl ASCover {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        let field = num.field();
        if den.field() != field {
            return Err(Error::MixedFields(field.degree(), den.field().degree()));
        }
        if den.is_zero() {
            return Err(Error::Poly("zero denominator".into()));
        }
        let mut c = ASCover {
            base_field: field,
            num,
            den,
            reduced: false,
        };
        c.normalize()?;
        Ok(c)
    }

    pub fn polynomial(f: Poly) -> Result<Self> {
        let one = Poly::one(f.field());
        ASCover::new(f, one)
    }

    fn normalize(&mut self) -> Result<()> {
        let g = self.num.gcd(&self.den);
        self.num = self.num.exact_div(&g)?;
        self.den = self.den.exact_div(&g)?;
        let lead = self.den.lead();
        let inv = self.base_field.inv(lead)?;
        self.num = self.num.scale(inv);
        self.den = self.den.scale(inv);
        Ok(())
    }

    pub fn poles(&self) -> Result<Vec<Pole>> {
        let mut out = Vec::new();
        for (p, m) in self.den.factor()? {
            out.push(Pole {
                degree: p.degree().unwrap_or(0) as u32,
                place: Some(p),
                order: m as u64,
            });
        }
        if let (Some(dn), Some(dd)) = (self.num.degree(), self.den.degree()) {
            if dn > dd {
                out.push(Pole {
                    place: None,
                    degree: 1,
                    order: (dn - dd) as u64,
                });
            }
        }
        Ok(out)
    }

    pub fn is_degenerate(&self) -> Result<bool> {
        Ok(self.poles()?.is_empty())
    }

    /// `f + h^2 + h`.
    pub fn add_as(&self, h_num: &Poly, h_den: &Poly) -> Result<ASCover> {
        // f + h^2 + h = (N h_d^2 + D h_n^2 + D h_n h_d) / (D h_d^2)
        let hd2 = h_den.mul(h_den);
        let num = self
            .num
            .mul(&hd2)
            .add(&self.den.mul(&h_num.mul(h_num)))
            .add(&self.den.mul(&h_num.mul(h_den)));
        let den = self.den.mul(&hd2);
        ASCover::new(num, den)
    }
}

/// Removes even pole orders by subtracting `h^2 + h` at each offending place.
pub fn as_reduce(c: &ASCover) -> Result<ASCover> {
    let field = c.base_field;
    let mut cur = c.clone();
    loop {
        let even = cur.poles()?.into_iter().find(|p| p.order % 2 == 0);
        let Some(pole) = even else {
            cur.reduced = true;
            return Ok(cur);
        };
        let half = (pole.order / 2) as usize;
        cur = match &pole.place {
            None => {
                let lc = field.div(cur.num.lead(), cur.den.lead());
                let h = Poly::monomial(field, field.sqrt(lc), half);
                cur.add_as(&h, &Poly::one(field))?
            }
            Some(p) => {
                // D = P^m D1; B^2 = N / D1 in F_q[x]/P, h = B / P^(m/2)
                let d1 = cur.den.exact_div(&p.pow(pole.order))?;
                let a = cur.num.mul_mod(&inverse_mod(&d1, p)?, p)?;
                let k = field.degree() as u128 * p.degree().unwrap_or(0) as u128;
                let b = a.pow_mod(1u128 << (k - 1), p)?;
                cur.add_as(&b, &p.pow(half as u64))?
            }
        };
    }
}

fn inverse_mod(a: &Poly, m: &Poly) -> Result<Poly> {
    // extended Euclid
    let field = a.field();
    let (mut r0, mut r1) = (m.clone(), a.rem(m)?);
    let (mut s0, mut s1) = (Poly::zero(field), Poly::one(field));
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1)?;
        let s = s0.add(&q.mul(&s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    if r0.degree() != Some(0) {
        return Err(Error::Poly("not invertible modulo the place".into()));
    }
    s0.scale(field.inv(r0.lead())?).rem(m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceReport {
    /// `"inf"` or the irreducible polynomial's coefficients, low to high.
    pub place: String,
    pub degree: u32,
    pub pole_order: u64,
    pub filtration: Vec<u128>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverAnalysis {
    pub places: Vec<PlaceReport>,
    pub genus: u64,
    pub two_rank: u64,
}

/// Genus and 2-rank of a reduced cover from its poles.
pub fn as_cover_analyze(c: &ASCover) -> Result<CoverAnalysis> {
    let poles = c.poles()?;
    if poles.is_empty() {
        return Err(Error::DegenerateCover);
    }
    if let Some(p) = poles.iter().find(|p| p.order % 2 == 0) {
        return Err(Error::NotReduced(p.order));
    }
    let mut places = Vec::new();
    let mut weighted = 0i128;
    let mut points = 0u128;
    for p in &poles {
        let mut filtration = vec![2u128; p.order as usize + 1];
        filtration.push(1);
        weighted += p.degree as i128 * different_exponent(&filtration) as i128;
        points += p.degree as u128;
        let place = match &p.place {
            None => "inf".to_string(),
            Some(q) => format!("{:?}", q.coeffs()),
        };
        places.push(PlaceReport {
            place,
            degree: p.degree,
            pole_order: p.order,
            filtration,
        });
    }
    // degree-2 cover of the line: 2g - 2 = 2(-2) + sum deg * d
    let genus = genus_from_twice(-4 + weighted)?;
    // ramified geometric points are totally ramified with l = 1
    let short: Vec<u128> = vec![1; points as usize];
    let two_rank = deuring_shafarevich(2, 0, &short)?;
    Ok(CoverAnalysis {
        places,
        genus,
        two_rank,
    })
}

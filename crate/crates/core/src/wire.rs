//! JSON encodings of ring elements, Laurent polynomials and fractions, and
//! the parsers for character and specialization specs.
//!
//! A polynomial is `{"order": N, "terms": [[exp, c], ...]}` in increasing
//! exponent order, where `c` is the coefficient vector (rational strings) in
//! the basis `1, zeta_N, zeta_N^2, ...`. Over the universal ring, `c` is
//! `{"d": d, "terms": [[t, u, vec], ...]}` for `sum vec T^t U^u`.

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::families::{SpecHom, Twist, Universal};
use crate::fraction::LocFraction;
use crate::laurent::LaurentPoly;
use crate::local::{least_nonresidue, Ext, LocalField, MultChar};
use crate::ring::{parse_rational, Cyc, Scalar};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Scalars with a JSON encoding and a token syntax.
pub trait WireScalar: Scalar {
    /// Least `N` such that the value lies in `Q(zeta_N)`.
    fn wire_order(&self) -> u64;
    fn to_wire(&self, order: u64) -> Value;
    fn from_wire(v: &Value, order: u64) -> Result<Self>;

    /// A single factor: `"3"`, `"-1/2"`, `"zeta4^3"`, and over the universal
    /// ring `"T"` (alias `"c"`), `"U"`, with optional `^k`.
    fn parse_atom(tok: &str, d: u64) -> Result<Self>;

    /// A `*`-separated product of atoms.
    fn parse_token(s: &str, d: u64) -> Result<Self> {
        s.split('*').try_fold(Self::one(), |acc, a| {
            Ok(acc * Self::parse_atom(a.trim(), d)?)
        })
    }
}

fn rational_vec(v: &[BigRational]) -> Value {
    Value::Array(v.iter().map(|q| Value::String(q.to_string())).collect())
}

fn parse_rational_vec(v: &Value) -> Result<Vec<BigRational>> {
    v.as_array()
        .ok_or_else(|| parse_err("expected a coefficient vector"))?
        .iter()
        .map(|x| {
            x.as_str()
                .and_then(parse_rational)
                .ok_or_else(|| parse_err(format!("bad rational {x}")))
        })
        .collect()
}

/// `zetaN^k` or `zetaN`.
fn parse_zeta(tok: &str) -> Option<Cyc> {
    let rest = tok.strip_prefix("zeta")?;
    let (n, k) = match rest.split_once('^') {
        Some((n, k)) => (n.parse::<u64>().ok()?, k.parse::<i64>().ok()?),
        None => (rest.parse::<u64>().ok()?, 1),
    };
    (n >= 1).then(|| Cyc::zeta(n, k))
}

fn split_power(tok: &str) -> Result<(&str, i64)> {
    match tok.split_once('^') {
        Some((b, e)) => Ok((
            b,
            e.parse()
                .map_err(|_| parse_err(format!("bad exponent in {tok}")))?,
        )),
        None => Ok((tok, 1)),
    }
}

impl WireScalar for BigRational {
    fn wire_order(&self) -> u64 {
        1
    }

    fn to_wire(&self, _order: u64) -> Value {
        rational_vec(std::slice::from_ref(self))
    }

    fn from_wire(v: &Value, order: u64) -> Result<Self> {
        Cyc::from_wire(v, order)?
            .as_rational()
            .ok_or_else(|| parse_err("coefficient is not rational"))
    }

    fn parse_atom(tok: &str, d: u64) -> Result<Self> {
        Cyc::parse_atom(tok, d)?
            .as_rational()
            .ok_or_else(|| parse_err(format!("{tok} is not rational")))
    }
}

impl WireScalar for Cyc {
    fn wire_order(&self) -> u64 {
        self.shrink().order()
    }

    fn to_wire(&self, order: u64) -> Value {
        rational_vec(self.shrink().embed(order).coeffs())
    }

    fn from_wire(v: &Value, order: u64) -> Result<Self> {
        Ok(Cyc::from_coeffs(order, parse_rational_vec(v)?).shrink())
    }

    fn parse_atom(tok: &str, _d: u64) -> Result<Self> {
        if let Some(z) = parse_zeta(tok) {
            return Ok(z);
        }
        parse_rational(tok)
            .map(Cyc::rational)
            .ok_or_else(|| parse_err(format!("bad scalar token {tok:?}")))
    }
}

impl WireScalar for Universal {
    fn wire_order(&self) -> u64 {
        self.terms().fold(1, |n, (_, _, c)| n.lcm(&c.wire_order()))
    }

    fn to_wire(&self, order: u64) -> Value {
        let terms: Vec<Value> = self
            .terms()
            .map(|(t, u, c)| json!([t, u, c.to_wire(order)]))
            .collect();
        json!({"d": self.u_order(), "terms": terms})
    }

    fn from_wire(v: &Value, order: u64) -> Result<Self> {
        let d = v["d"].as_u64().ok_or_else(|| parse_err("missing d"))?;
        let terms = v["terms"]
            .as_array()
            .ok_or_else(|| parse_err("missing terms"))?;
        let mut acc = Universal::zero();
        for t in terms {
            let e = t
                .as_array()
                .filter(|a| a.len() == 3)
                .ok_or_else(|| parse_err("bad term"))?;
            let (ti, ui) = (e[0].as_i64(), e[1].as_i64());
            let (ti, ui) = ti.zip(ui).ok_or_else(|| parse_err("bad exponents"))?;
            let c = Cyc::from_wire(&e[2], order)?;
            acc = acc + Twist::term(c, ti, ui, d.max(1));
        }
        Ok(acc)
    }

    fn parse_atom(tok: &str, d: u64) -> Result<Self> {
        let (base, e) = split_power(tok)?;
        match base {
            "T" | "c" => Ok(Twist::term(Cyc::one(), e, 0, 1)),
            "U" => {
                if d == 0 {
                    return Err(parse_err("U needs a nontrivial unit quotient"));
                }
                Ok(Twist::term(Cyc::one(), 0, e, d))
            }
            _ => Ok(Twist::constant(Cyc::parse_atom(tok, d)?)),
        }
    }
}

pub fn poly_to_json<R: WireScalar>(p: &LaurentPoly<R>) -> Value {
    let order = p.terms().fold(1u64, |n, (_, c)| n.lcm(&c.wire_order()));
    let terms: Vec<Value> = p
        .terms()
        .map(|(e, c)| json!([e, c.to_wire(order)]))
        .collect();
    json!({"order": order, "terms": terms})
}

pub fn poly_from_json<R: WireScalar>(v: &Value) -> Result<LaurentPoly<R>> {
    let order = v["order"]
        .as_u64()
        .filter(|n| *n >= 1)
        .ok_or_else(|| parse_err("missing order"))?;
    let terms = v["terms"]
        .as_array()
        .ok_or_else(|| parse_err("missing terms"))?;
    let mut p = LaurentPoly::zero();
    for t in terms {
        let e = t
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| parse_err("bad term"))?;
        let exp = e[0].as_i64().ok_or_else(|| parse_err("bad exponent"))?;
        p.add_term(exp, R::from_wire(&e[1], order)?);
    }
    Ok(p)
}

pub fn frac_to_json<R: WireScalar>(f: &LocFraction<R>) -> Value {
    json!({"num": poly_to_json(f.num()), "den": poly_to_json(f.den())})
}

pub fn frac_from_json<R: WireScalar>(v: &Value) -> Result<LocFraction<R>> {
    LocFraction::new(poly_from_json(&v["num"])?, poly_from_json(&v["den"])?)
}

/// `{"p": 5, "ext": "unramified", "conductor": 1, "unit_gen_image": "zeta4^1",
/// "at_uniformizer": "c"}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CharSpec {
    pub field: LocalField,
    pub level: u32,
    pub unit_gen_image: String,
    pub at_uniformizer: String,
}

fn parse_ext(s: &str, p: u64) -> Result<Ext> {
    match s {
        "trivial" | "none" | "split" => Ok(Ext::Trivial),
        "unramified" => Ok(Ext::Unramified),
        "ramified" => Ok(Ext::Ramified { d: 1 }),
        "ramified-nonresidue" => Ok(Ext::Ramified {
            d: least_nonresidue(p),
        }),
        _ => Err(parse_err(format!("unknown ext {s:?}"))),
    }
}

fn prime(p: u64) -> bool {
    p >= 2
        && (2..)
            .take_while(|k| k * k <= p)
            .all(|k| !p.is_multiple_of(k))
}

impl CharSpec {
    pub fn from_json(v: &Value) -> Result<Self> {
        let p = v["p"].as_u64().ok_or_else(|| parse_err("missing p"))?;
        if !prime(p) || p == 2 {
            return Err(parse_err(format!("p = {p} must be an odd prime")));
        }
        let ext = parse_ext(v["ext"].as_str().unwrap_or("trivial"), p)?;
        let level = v
            .get("conductor")
            .or_else(|| v.get("level"))
            .map(|c| {
                c.as_u64()
                    .ok_or_else(|| parse_err("conductor must be an integer"))
            })
            .transpose()?
            .unwrap_or(0) as u32;
        let text = |k: &str, default: &str| -> Result<String> {
            match v.get(k) {
                None => Ok(default.to_string()),
                Some(Value::String(s)) => Ok(s.clone()),
                Some(Value::Number(n)) => Ok(n.to_string()),
                Some(x) => Err(parse_err(format!("{k}: expected a token, got {x}"))),
            }
        };
        Ok(CharSpec {
            field: LocalField::new(p, ext),
            level,
            unit_gen_image: text("unit_gen_image", "1")?,
            at_uniformizer: text("at_uniformizer", "1")?,
        })
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(s).map_err(|e| parse_err(e.to_string()))?)
    }

    /// True when a token mentions `T`, `c` or `U`.
    pub fn is_universal(&self) -> bool {
        [&self.unit_gen_image, &self.at_uniformizer]
            .iter()
            .any(|s| {
                s.split('*')
                    .any(|a| matches!(a.trim().split('^').next(), Some("T" | "c" | "U")))
            })
    }

    pub fn build<R: WireScalar>(&self) -> Result<MultChar<R>> {
        let d = self.field.unit_quotient_order(self.level);
        let g = R::parse_token(&self.unit_gen_image, d)?;
        let c = R::parse_token(&self.at_uniformizer, d)?;
        MultChar::try_new(self.field.clone(), self.level, g, c)
    }
}

/// `{"T": "2", "U": "zeta4^1", "target": {"kind": "cyclotomic", "N": 20}}`.
pub fn parse_specialization(v: &Value, d: u64) -> Result<SpecHom<Cyc>> {
    let target = &v["target"];
    match target["kind"].as_str() {
        Some("cyclotomic") | None => {}
        Some(k) => return Err(Error::Unsupported(format!("target kind {k:?}"))),
    }
    let token = |k: &str| -> Result<Cyc> {
        let s = v[k].as_str().unwrap_or("1");
        Cyc::parse_token(s, d)
    };
    let (t, u) = (token("T")?, token("U")?);
    if let Some(n) = target["N"].as_u64() {
        for x in [&t, &u] {
            if n % x.wire_order() != 0 {
                return Err(Error::MissingInRing(format!("{x:?} in Q(zeta_{n})")));
            }
        }
    }
    SpecHom::new(t, u, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;

    #[test]
    fn poly_round_trip() {
        let p = LaurentPoly::from_terms([
            (-2, Cyc::zeta(4, 1)),
            (0, Cyc::rational(rat(3, 7))),
            (5, Cyc::zeta(3, 2)),
        ]);
        let v = poly_to_json(&p);
        assert_eq!(v["order"], 12);
        assert_eq!(poly_from_json::<Cyc>(&v).unwrap(), p);
        let q = LaurentPoly::from_terms([(1, rat(-1, 2))]);
        assert_eq!(poly_from_json::<BigRational>(&poly_to_json(&q)).unwrap(), q);
    }

    #[test]
    fn universal_round_trip() {
        let x = Universal::parse_token("zeta4^1*T^-2*U^3", 4).unwrap();
        let p = LaurentPoly::from_terms([(0, Universal::one()), (1, x)]);
        let f = LocFraction::new(LaurentPoly::one(), p).unwrap();
        assert_eq!(frac_from_json::<Universal>(&frac_to_json(&f)).unwrap(), f);
    }

    #[test]
    fn char_spec() {
        let s = CharSpec::parse(
            r#"{"p":5, "ext":"unramified", "conductor":1, "unit_gen_image":"zeta4^1", "at_uniformizer":"c"}"#,
        )
        .unwrap();
        assert!(s.is_universal());
        assert_eq!(s.field.q_e(), 25);
        let w: MultChar<Universal> = s.build().unwrap();
        assert_eq!(w.at_uniformizer(), &Universal::t());
        let plain = CharSpec::parse(
            r#"{"p":5, "conductor":1, "unit_gen_image":"zeta4^1", "at_uniformizer":"2"}"#,
        )
        .unwrap();
        assert!(!plain.is_universal());
        assert!(plain.build::<Cyc>().is_ok());
        assert!(CharSpec::parse(r#"{"p":4}"#).is_err());
        assert!(
            CharSpec::parse(r#"{"p":5, "conductor":1, "unit_gen_image":"zeta3^1"}"#)
                .unwrap()
                .build::<Cyc>()
                .is_err()
        );
    }

    #[test]
    fn specialization_spec() {
        let v: Value = serde_json::from_str(
            r#"{"T": "2", "U": "zeta4^1", "target": {"kind": "cyclotomic", "N": 20}}"#,
        )
        .unwrap();
        let h = parse_specialization(&v, 4).unwrap();
        assert_eq!(h.apply(&Universal::t()).unwrap(), Cyc::from_int(2));
        let bad: Value = serde_json::from_str(r#"{"U": "zeta8^1", "target": {"N": 20}}"#).unwrap();
        assert!(parse_specialization(&bad, 8).is_err());
    }
}

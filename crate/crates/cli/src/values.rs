//! Value literals accepted by `pslq` and `screen-support`.

use anyhow::{anyhow, bail, Result};
use num_bigint::BigInt;

use latrec_core::arith::{rational_from_string, PrecReal};
use latrec_core::instruments::rational_to_prec;

/// Parses one value: `sqrt:K`, `rat:N/D`, a canonical hex literal
/// (`[-]0x<hex>p<exp>@<prec>`), a decimal integer, or a decimal fraction.
pub fn parse_value(s: &str, prec: u32) -> Result<PrecReal> {
    let s = s.trim();
    if let Some(k) = s.strip_prefix("sqrt:") {
        let v: u64 = k.parse().map_err(|e| anyhow!("sqrt argument {:?}: {}", k, e))?;
        return PrecReal::from_u64(v, prec.max(64))
            .sqrt(prec)
            .map_err(|e| anyhow!(e.to_string()));
    }
    if let Some(r) = s.strip_prefix("rat:") {
        let rat = rational_from_string(r).map_err(|e| anyhow!(e.to_string()))?;
        return Ok(rational_to_prec(&rat, prec));
    }
    if s.contains('@') {
        return s.parse::<PrecReal>().map_err(|e| anyhow!("bad literal {:?}: {}", s, e));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            bail!("bad decimal fraction {:?}", s);
        }
        let digits: String = format!("{}{}", int_part, frac_part);
        let num: BigInt = digits.parse().map_err(|e| anyhow!("bad decimal {:?}: {}", s, e))?;
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        let rat = num_rational_from(num, den)?;
        return Ok(rational_to_prec(&rat, prec));
    }
    let v: BigInt = s.parse().map_err(|e| anyhow!("bad integer {:?}: {}", s, e))?;
    Ok(PrecReal::from_bigint(&v, prec.max(v.bits() as u32 + 1)))
}

fn num_rational_from(num: BigInt, den: BigInt) -> Result<latrec_core::arith::Rational> {
    if den == BigInt::from(0) {
        bail!("zero denominator");
    }
    Ok(latrec_core::arith::Rational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms_parse() {
        assert_eq!(parse_value("7", 64).unwrap(), PrecReal::from_u64(7, 64));
        assert_eq!(parse_value("0.5", 64).unwrap(), PrecReal::from_f64(0.5, 64).unwrap());
        let r2 = parse_value("sqrt:2", 128).unwrap();
        let err = r2.mul_exact(&r2).sub_exact(&PrecReal::from_u64(2, 64));
        assert!(err.abs_lt_pow2(-120));
        assert!(parse_value("x", 64).is_err());
    }
}

//! Sequence expressions accepted by `nogo --sequence`.

use subfreeze::potential::{
    build_cor53_sequence, build_thm51_sequence, custom_sequence, hofbauer_sequence, inverse_power_sequence,
    FreezingSequence,
};
use subfreeze::Error;

fn num(s: &str, expr: &str) -> Result<f64, Error> {
    s.trim()
        .parse()
        .map_err(|_| Error::input(format!("bad number '{s}' in sequence '{expr}'")))
}

/// `C/n^P`, `1/n`, `log^2n/n`, `cor53`, `thm51:C`, `hofbauer:G:S`, `values:a,b,…`.
pub fn parse(expr: &str) -> Result<FreezingSequence, Error> {
    let e: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    if e == "cor53" || e == "log^2n/n" || e == "log^2(n)/n" {
        return Ok(build_cor53_sequence());
    }
    if let Some(rest) = e.strip_prefix("thm51:") {
        return build_thm51_sequence(num(rest, expr)?);
    }
    if let Some(rest) = e.strip_prefix("hofbauer:") {
        let (g, s) = rest
            .split_once(':')
            .ok_or_else(|| Error::input("hofbauer expects hofbauer:GAMMA:SHIFT"))?;
        return hofbauer_sequence(num(g, expr)?, num(s, expr)?);
    }
    if let Some(rest) = e.strip_prefix("values:") {
        let vals = rest.split(',').map(|v| num(v, expr)).collect::<Result<Vec<_>, _>>()?;
        return custom_sequence(vals, expr);
    }
    if let Some((c, tail)) = e.split_once("/n") {
        let c = if c.is_empty() { 1.0 } else { num(c, expr)? };
        let p = match tail {
            "" => 1.0,
            t => num(
                t.strip_prefix('^')
                    .ok_or_else(|| Error::input(format!("expected ^ after /n in '{expr}'")))?,
                expr,
            )?,
        };
        return inverse_power_sequence(c, p);
    }
    Err(Error::input(format!("unrecognized sequence expression '{expr}'")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use subfreeze::potential::AsymptoticClass;

    #[test]
    fn forms() {
        let s = parse("1/n^2").unwrap();
        assert_eq!(s.class, AsymptoticClass::InversePower { exponent: 2.0 });
        assert_eq!(s.value(4), 1.0 / 16.0);
        assert_eq!(parse("0.5/n").unwrap().value(2), 0.25);
        assert_eq!(parse("log^2n/n").unwrap().class, AsymptoticClass::Log2OverJ);
        assert!(parse("thm51:0.5").is_ok());
        assert!(parse("hofbauer:3:5").is_ok());
        assert_eq!(parse("values:3,2,1").unwrap().value(1), 2.0);
        assert!(parse("n^2").is_err());
        assert!(parse("1/n^x").is_err());
    }
}

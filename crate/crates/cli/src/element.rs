//! Textual names for adele elements, as accepted by `census` and `equiv`.

use adele_lab::adele::{constant, diagonal, legendre_element, AdeleElement};
use adele_lab::bernoulli::fmzv_element;
use adele_lab::finite_log::{finite_log2, sqrt_series_residue};
use adele_lab::frobenius::{ap_element, CurveParams};
use adele_lab::qfib::qfib_element;
use adele_lab::Rational;

pub const ELEMENT_HELP: &str = "element: diag:N[/D] | const:N | legendre:A | qfib:Q | fmzv:K | ap:A,B | sqrt2 | finite-log";

fn int(s: &str) -> Result<i64, String> {
    s.trim().parse().map_err(|_| format!("not an integer: {s:?}"))
}

pub fn parse_element(spec: &str) -> Result<AdeleElement, String> {
    let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
    let element = match kind {
        "diag" => match arg.split_once('/') {
            Some((n, d)) => {
                let d = int(d)?;
                if d == 0 {
                    return Err("zero denominator".into());
                }
                diagonal(Rational::new(int(n)?, d))
            }
            None => constant(int(arg)?),
        },
        "const" => constant(int(arg)?),
        "legendre" => legendre_element(int(arg)?),
        "qfib" => {
            let q = int(arg)?;
            if q == 0 || q == 1 {
                return Err("qfib needs q outside {0, 1}".into());
            }
            qfib_element(q)
        }
        "fmzv" => {
            let k = u64::try_from(int(arg)?).map_err(|_| "k must be positive".to_string())?;
            fmzv_element(k).map_err(|e| e.to_string())?
        }
        "ap" => {
            let (a, b) = arg.split_once(',').ok_or("ap needs A,B")?;
            ap_element(CurveParams::new(int(a)?, int(b)?).map_err(|e| e.to_string())?)
        }
        "sqrt2" => AdeleElement::new("sqrt2", |p| {
            (p != 2).then(|| sqrt_series_residue(p).expect("odd prime"))
        }),
        "finite-log" => AdeleElement::new("finite-log", |p| {
            (p != 2).then(|| finite_log2(p).expect("odd prime"))
        }),
        _ => return Err(format!("unknown element {spec:?}; {ELEMENT_HELP}")),
    };
    Ok(element.renamed(spec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_known_elements() {
        assert_eq!(parse_element("diag:1/2").unwrap().eval(7).unwrap().value(), 4);
        assert_eq!(parse_element("const:-1").unwrap().eval(7).unwrap().value(), 6);
        assert_eq!(parse_element("legendre:2").unwrap().eval(7).unwrap().value(), 1);
        assert_eq!(parse_element("ap:1,1").unwrap().eval(5).unwrap().value(), 2);
        assert_eq!(parse_element("sqrt2").unwrap().eval(5).unwrap().centered(), -2);
        assert_eq!(parse_element("fmzv:3").unwrap().eval(7).unwrap().value(), 1);
        assert_eq!(parse_element("qfib:2").unwrap().eval(7).unwrap().value(), 1);
        assert!(parse_element("finite-log").unwrap().eval(2).is_none());
    }

    #[test]
    fn rejects_bad_specs() {
        for bad in ["nope", "diag:x", "diag:1/0", "qfib:1", "fmzv:4", "ap:0,0", "ap:1"] {
            assert!(parse_element(bad).is_err(), "{bad}");
        }
    }
}

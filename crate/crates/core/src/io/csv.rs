use std::fmt::Write as _;

use crate::optimizer::TraceRow;
use crate::physics::SpectrumPoint;

/// Twelve significant digits, fixed notation for moderate exponents and
/// scientific otherwise, trailing zeros removed (C's `%.12g`).
pub fn fmt_sig(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..DIGITS).contains(&exp) {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn convergence_csv(trace: &[TraceRow]) -> String {
    let mut s = String::from("generation,best,mean,F,pop_std\n");
    for r in trace {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            r.generation,
            fmt_sig(r.best),
            fmt_sig(r.mean),
            fmt_sig(r.f),
            fmt_sig(r.pop_std)
        );
    }
    s
}

pub fn spectrum_csv(points: &[SpectrumPoint]) -> String {
    let mut s = String::from("wavelength_nm,deff_abs,deff_norm\n");
    for p in points {
        let _ = writeln!(
            s,
            "{},{},{}",
            fmt_sig(p.wavelength_nm),
            fmt_sig(p.deff_abs),
            fmt_sig(p.deff_norm)
        );
    }
    s
}

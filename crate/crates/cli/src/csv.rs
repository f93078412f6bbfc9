//! CSV conventions: comma separated, `#` comment lines, floats with 17
//! significant digits so every value reparses to the same bits.

use std::fmt::Write;

pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Accumulates CSV text in memory.
#[derive(Debug, Default)]
pub struct Table {
    text: String,
}

impl Table {
    pub fn with_header(columns: &[&str]) -> Self {
        let mut t = Table::default();
        t.line(&columns.join(","));
        t
    }

    pub fn line(&mut self, line: &str) {
        self.text.push_str(line);
        self.text.push('\n');
    }

    pub fn row(&mut self, cells: &[String]) {
        self.line(&cells.join(","));
    }

    pub fn comment(&mut self, args: std::fmt::Arguments<'_>) {
        self.text.push_str("# ");
        self.text.write_fmt(args).expect("writing to a String");
        self.text.push('\n');
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn fixed_examples() {
        assert_eq!(float(1.0), "1.0000000000000000e0");
        assert_eq!(float(0.1), "1.0000000000000001e-1");
        assert_eq!(float(-2.5e-300), "-2.5000000000000000e-300");
        assert_eq!(float(f64::INFINITY), "inf");
        assert!(float(f64::NAN).parse::<f64>().unwrap().is_nan());
    }

    #[test]
    fn table_layout() {
        let mut t = Table::with_header(&["k", "t"]);
        t.row(&["0".into(), float(0.5)]);
        t.comment(format_args!("verdict: {}", "converging"));
        assert_eq!(t.into_string(), "k,t\n0,5.0000000000000000e-1\n# verdict: converging\n");
    }

    proptest! {
        #[test]
        fn floats_round_trip_bitwise(bits in any::<u64>()) {
            let x = f64::from_bits(bits);
            prop_assume!(!x.is_nan());
            prop_assert_eq!(float(x).parse::<f64>().unwrap().to_bits(), bits);
        }
    }
}

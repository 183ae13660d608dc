//! Trajectory CSV: `t,N1,N2,E` then real and imaginary parts of the 13 moments.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use twomode::integrate::Sample;
use twomode::moments::MOMENT_NAMES;

pub fn header() -> String {
    let mut cols = vec!["t".to_string(), "N1".into(), "N2".into(), "E".into()];
    for name in MOMENT_NAMES {
        cols.push(format!("re_{name}"));
        cols.push(format!("im_{name}"));
    }
    cols.join(",")
}

pub fn write_csv<W: Write>(mut w: W, samples: &[Sample]) -> io::Result<()> {
    if samples.is_empty() {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, "empty series"));
    }
    writeln!(w, "{}", header())?;
    for s in samples {
        let ws = &s.witness;
        write!(w, "{:.15e},{:.15e},{:.15e},{:.15e}", ws.t, ws.n1, ws.n2, ws.e)?;
        for z in s.moments.to_array() {
            write!(w, ",{:.15e},{:.15e}", z.re, z.im)?;
        }
        writeln!(w)?;
    }
    w.flush()
}

pub fn emit_csv(path: &Path, samples: &[Sample]) -> io::Result<()> {
    write_csv(BufWriter::new(File::create(path)?), samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use twomode::integrate::WitnessSample;
    use twomode::moments::{initial_moments_fock, MOMENT_COUNT};

    fn one_sample() -> Vec<Sample> {
        let m = initial_moments_fock(1, 0);
        vec![Sample { moments: m, witness: WitnessSample::from_moments(0.0, &m) }]
    }

    #[test]
    fn header_columns() {
        let h = header();
        let cols: Vec<&str> = h.split(',').collect();
        assert_eq!(cols.len(), 4 + 2 * MOMENT_COUNT);
        assert_eq!(&cols[..6], &["t", "N1", "N2", "E", "re_n1", "im_n1"]);
        assert_eq!(cols.last(), Some(&"im_sc"));
    }

    #[test]
    fn single_sample_gives_two_lines() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &one_sample()).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[1].starts_with("0.000000000000000e0,1.000000000000000e0,"));
        let values: Vec<f64> = lines[1].split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(values.len(), 4 + 2 * MOMENT_COUNT);
    }

    #[test]
    fn empty_series_rejected() {
        assert!(write_csv(Vec::new(), &[]).is_err());
    }
}

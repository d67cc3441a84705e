//! Complex literals and `a:b:n` / comma-list grids.

use crate::linalg::C64;

use super::CliError;

/// Parse `1`, `-2.5`, `i`, `-3i`, `1+2i`, `0.5-1e-3i` and similar.
pub fn parse_complex(text: &str) -> Result<C64, CliError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || CliError::Input(format!("'{text}' is not a complex number"));
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| C64::new(re, 0.0)).map_err(|_| bad());
    };
    // Split at the last sign that does not start the literal or an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| bad())?,
    };
    let re = re.parse::<f64>().map_err(|_| bad())?;
    Ok(C64::new(re, im))
}

/// `a:b:n` (n equally spaced points from a to b) or a comma list.
pub fn parse_complex_grid(text: &str) -> Result<Vec<C64>, CliError> {
    let grid = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        let [a, b, n] = parts[..] else {
            return Err(CliError::Input(format!("grid '{text}' must have the form a:b:n")));
        };
        let (a, b) = (parse_complex(a)?, parse_complex(b)?);
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("grid '{text}': '{n}' is not a point count")))?;
        match n {
            0 => Vec::new(),
            1 => vec![a],
            _ => (0..n).map(|k| a + (b - a) * (k as f64 / (n - 1) as f64)).collect(),
        }
    } else {
        text.split(',').map(parse_complex).collect::<Result<Vec<_>, _>>()?
    };
    if grid.is_empty() {
        return Err(CliError::Input(format!("grid '{text}' is empty")));
    }
    for (k, z) in grid.iter().enumerate() {
        if grid[..k].contains(z) {
            return Err(CliError::Input(format!("grid '{text}' repeats the point {z}")));
        }
    }
    Ok(grid)
}

/// A real grid: non-empty and strictly increasing.
pub fn parse_real_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let grid = parse_complex_grid(text)?;
    if grid.iter().any(|z| z.im != 0.0) {
        return Err(CliError::Input(format!("grid '{text}' must be real")));
    }
    let grid: Vec<f64> = grid.iter().map(|z| z.re).collect();
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Input(format!("grid '{text}' must be strictly increasing")));
    }
    Ok(grid)
}

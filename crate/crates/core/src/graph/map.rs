use crate::error::{Error, Result};

use super::Graph;

fn passable(ch: char) -> Option<bool> {
    match ch {
        '.' | 'G' => Some(true),
        '@' | 'O' | 'T' | 'W' => Some(false),
        _ => None,
    }
}

/// Parses a MAPF benchmark `.map` file (`type octile`, `height H`, `width W`,
/// `map`, then `H` rows of `W` characters).
pub fn parse_map(text: &str) -> Result<Graph> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r')));

    let mut height = None;
    let mut width = None;
    let mut seen_type = false;
    loop {
        let (no, line) = lines
            .next()
            .ok_or_else(|| Error::parse(0, "unexpected end of file in header"))?;
        let mut words = line.split_whitespace();
        match (words.next(), words.next(), words.next()) {
            (Some("type"), Some(_), None) if !seen_type => seen_type = true,
            (Some("height"), Some(v), None) if height.is_none() => {
                height = Some(parse_dim(no, v)?);
            }
            (Some("width"), Some(v), None) if width.is_none() => {
                width = Some(parse_dim(no, v)?);
            }
            (Some("map"), None, None) => break,
            _ => return Err(Error::parse(no, format!("malformed header line {line:?}"))),
        }
        if no > 3 {
            return Err(Error::parse(no, "expected `map` after type/height/width"));
        }
    }
    let (Some(height), Some(width), true) = (height, width, seen_type) else {
        return Err(Error::parse(0, "header must declare type, height and width"));
    };

    if width.saturating_mul(height) > 1 << 20 {
        return Err(Error::parse(2, "maps are limited to 2^20 cells"));
    }

    let mut mask = Vec::with_capacity(width * height);
    let mut last_line = 4;
    for row in 0..height {
        let (no, line) = lines
            .next()
            .ok_or_else(|| Error::parse(last_line + 1, format!("missing map row {row}")))?;
        last_line = no;
        let len = line.chars().count();
        if len != width {
            return Err(Error::parse(no, format!("row has {len} characters, expected {width}")));
        }
        for ch in line.chars() {
            mask.push(passable(ch).ok_or_else(|| Error::parse(no, format!("unknown map character {ch:?}")))?);
        }
    }
    for (no, line) in lines {
        if !line.trim().is_empty() {
            return Err(Error::parse(no, "trailing content after the last map row"));
        }
    }
    Ok(Graph::from_grid(width, height, &mask))
}

fn parse_dim(line: usize, value: &str) -> Result<usize> {
    match value.parse::<usize>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(Error::parse(line, format!("invalid dimension {value:?}"))),
    }
}

/// Renders a grid graph back to `.map` text using `.` and `@`. Returns `None`
/// for graphs without grid geometry.
pub fn to_map_text(graph: &Graph) -> Option<String> {
    let grid = graph.grid()?;
    let mut out = format!("type octile\nheight {}\nwidth {}\nmap\n", grid.height(), grid.width());
    for row in 0..grid.height() {
        for col in 0..grid.width() {
            out.push(if grid.is_passable(row, col) { '.' } else { '@' });
        }
        out.push('\n');
    }
    Some(out)
}

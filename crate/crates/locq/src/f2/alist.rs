//! Reader for the classic "alist" sparse matrix text format used to publish
//! LDPC check matrices: header `n m`, maximum degrees, per-column and
//! per-row degrees, then 1-based adjacency lists (zero entries are padding).
//! Both adjacency sections are parsed and cross-checked against each other.

use super::{BitMatrix, F2Error};

fn err(detail: impl Into<String>) -> F2Error {
    F2Error::AlistParse(detail.into())
}

fn numbers(line: &str, what: &str) -> Result<Vec<usize>, F2Error> {
    line.split_whitespace()
        .map(|t| t.parse().map_err(|_| err(format!("{what}: bad token {t:?}"))))
        .collect()
}

/// Parses alist text into a check matrix of shape m×n (rows = checks).
pub fn parse_alist(text: &str) -> Result<BitMatrix, F2Error> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let mut take = |what: &str| lines.next().ok_or_else(|| err(format!("missing {what}")));

    let header = numbers(take("size header")?, "size header")?;
    let [n, m] = header[..] else {
        return Err(err("size header must hold exactly two numbers"));
    };
    let max_line = numbers(take("degree header")?, "degree header")?;
    if max_line.len() != 2 {
        return Err(err("degree header must hold exactly two numbers"));
    }
    let col_deg = numbers(take("column degrees")?, "column degrees")?;
    if col_deg.len() != n {
        return Err(err(format!("{} column degrees, expected {n}", col_deg.len())));
    }
    let row_deg = numbers(take("row degrees")?, "row degrees")?;
    if row_deg.len() != m {
        return Err(err(format!("{} row degrees, expected {m}", row_deg.len())));
    }
    if col_deg.iter().sum::<usize>() != row_deg.iter().sum::<usize>() {
        return Err(err("column and row degree sums disagree"));
    }

    // 1-based entries, zeros are padding, declared degree must match.
    let mut adjacency = |what: &str, count: usize, deg: &[usize], limit: usize| {
        let mut lists = Vec::with_capacity(count);
        for i in 0..count {
            let entries = numbers(take(&format!("{what} list {i}"))?, what)?;
            let mut support: Vec<usize> = entries.iter().filter(|&&e| e != 0).map(|&e| e - 1).collect();
            if support.len() != deg[i] {
                return Err(err(format!(
                    "{what} {i}: {} entries, degree says {}",
                    support.len(),
                    deg[i]
                )));
            }
            support.sort_unstable();
            support.dedup();
            if support.len() != deg[i] {
                return Err(err(format!("{what} {i}: duplicate entries")));
            }
            if support.last().is_some_and(|&e| e >= limit) {
                return Err(err(format!("{what} {i}: index out of range")));
            }
            lists.push(support);
        }
        Ok(lists)
    };
    let by_col = adjacency("column", n, &col_deg, m)?;
    let by_row = adjacency("row", m, &row_deg, n)?;

    let matrix = BitMatrix::from_support(m, n, &by_row)
        .map_err(|e| err(format!("row lists do not form a matrix: {e}")))?;
    for (c, rows) in by_col.iter().enumerate() {
        for &r in rows {
            if !matrix.get(r, c) {
                return Err(err(format!(
                    "column list names entry ({r},{c}) absent from row lists"
                )));
            }
        }
    }
    // Equal degree sums plus one-sided containment gives set equality.
    Ok(matrix)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HAMMING: &str = "\
7 3
3 4
1 1 2 1 2 2 3
4 4 4
1
2
1 2
3
1 3
2 3
1 2 3
1 3 5 7
2 3 6 7
4 5 6 7
";

    #[test]
    fn parses_known_matrix() {
        let m = parse_alist(HAMMING).unwrap();
        let expect = BitMatrix::from_support(
            3,
            7,
            &[vec![0, 2, 4, 6], vec![1, 2, 5, 6], vec![3, 4, 5, 6]],
        )
        .unwrap();
        assert_eq!(m, expect);
    }

    #[test]
    fn zero_padding_is_ignored() {
        let padded = "\
7 3
3 4
1 1 2 1 2 2 3
4 4 4
1 0 0
2 0 0
1 2 0
3 0 0
1 3 0
2 3 0
1 2 3
1 3 5 7
2 3 6 7
4 5 6 7
";
        assert_eq!(parse_alist(padded).unwrap(), parse_alist(HAMMING).unwrap());
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_alist("").is_err());
        assert!(parse_alist("7 3 9\n").is_err());
        // Truncated adjacency section.
        let cut: String = HAMMING.lines().take(6).collect::<Vec<_>>().join("\n");
        assert!(parse_alist(&cut).is_err());
        // Mismatched adjacency: column section names (1,1) but row section
        // starts its first row at column 2.
        let skew = "\
2 2
1 1
1 1
1 1
1
2
2
1
";
        assert!(parse_alist(skew).is_err());
        // Degree sums disagree.
        let sums = "\
2 1
1 1
1 1
1
1
1
1
";
        assert!(parse_alist(sums).is_err());
    }
}

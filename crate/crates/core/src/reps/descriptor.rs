//! Representation descriptors and their compact string form.

use super::{binomial, RepsError};
use std::fmt;

/// Shape of an induced representation of GL(E).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RepDescriptor {
    Standard,
    Dual,
    Sym(usize),
    Ext(usize),
    Tensor(Vec<RepDescriptor>),
}

impl RepDescriptor {
    /// Dimension over a base space of dimension `e_dim`, if representable.
    pub fn dim(&self, e_dim: usize) -> Option<usize> {
        match self {
            RepDescriptor::Standard | RepDescriptor::Dual => Some(e_dim),
            RepDescriptor::Sym(k) => binomial(e_dim + k - 1, *k),
            RepDescriptor::Ext(p) => binomial(e_dim, *p),
            RepDescriptor::Tensor(parts) => {
                let mut acc: usize = 1;
                for part in parts {
                    acc = acc.checked_mul(part.dim(e_dim)?)?;
                }
                Some(acc)
            }
        }
    }

    /// Validate parameter ranges and the dimension cap.
    pub fn validate(&self, e_dim: usize, cap: usize) -> Result<usize, RepsError> {
        match self {
            RepDescriptor::Sym(k) if *k < 1 => {
                return Err(RepsError::InvalidDescriptor("sym power must be >= 1".into()))
            }
            RepDescriptor::Ext(p) if *p < 1 || *p > e_dim => {
                return Err(RepsError::InvalidDescriptor(format!(
                    "ext power must lie in 1..={e_dim}"
                )))
            }
            RepDescriptor::Tensor(parts) => {
                if parts.is_empty() {
                    return Err(RepsError::InvalidDescriptor("empty tensor".into()));
                }
                for part in parts {
                    part.validate(e_dim, cap)?;
                }
            }
            _ => {}
        }
        let dim = self
            .dim(e_dim)
            .ok_or(RepsError::DimensionOverflow { dim: usize::MAX, cap })?;
        if dim > cap {
            return Err(RepsError::DimensionOverflow { dim, cap });
        }
        Ok(dim)
    }

    /// Parse the compact string form: `std`, `dual`, `sym:k`, `ext:p`,
    /// `tensor(a,b,...)`.
    pub fn parse(s: &str) -> Result<Self, RepsError> {
        let (desc, rest) = Self::parse_prefix(s.trim())?;
        if !rest.is_empty() {
            return Err(RepsError::ParseError(s.into()));
        }
        Ok(desc)
    }

    fn parse_prefix(s: &str) -> Result<(Self, &str), RepsError> {
        let bad = || RepsError::ParseError(s.into());
        if let Some(rest) = s.strip_prefix("tensor(") {
            let mut parts = Vec::new();
            let mut rest = rest;
            loop {
                let (part, after) = Self::parse_prefix(rest)?;
                parts.push(part);
                if let Some(after) = after.strip_prefix(',') {
                    rest = after;
                } else if let Some(after) = after.strip_prefix(')') {
                    return Ok((RepDescriptor::Tensor(parts), after));
                } else {
                    return Err(bad());
                }
            }
        }
        let end = s
            .find(|c: char| c == ',' || c == ')')
            .unwrap_or(s.len());
        let (token, rest) = s.split_at(end);
        let desc = match token {
            "std" => RepDescriptor::Standard,
            "dual" => RepDescriptor::Dual,
            _ => {
                if let Some(k) = token.strip_prefix("sym:") {
                    RepDescriptor::Sym(k.parse().map_err(|_| bad())?)
                } else if let Some(p) = token.strip_prefix("ext:") {
                    RepDescriptor::Ext(p.parse().map_err(|_| bad())?)
                } else {
                    return Err(bad());
                }
            }
        };
        Ok((desc, rest))
    }
}

impl fmt::Display for RepDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepDescriptor::Standard => write!(f, "std"),
            RepDescriptor::Dual => write!(f, "dual"),
            RepDescriptor::Sym(k) => write!(f, "sym:{k}"),
            RepDescriptor::Ext(p) => write!(f, "ext:{p}"),
            RepDescriptor::Tensor(parts) => {
                write!(f, "tensor(")?;
                for (i, part) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{part}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trips() {
        for s in ["std", "dual", "sym:3", "ext:2", "tensor(std,sym:2)", "tensor(ext:1,tensor(dual,std))"] {
            let d = RepDescriptor::parse(s).unwrap();
            assert_eq!(d.to_string(), s);
        }
    }

    #[test]
    fn dims_are_exact_binomials() {
        assert_eq!(RepDescriptor::Ext(2).dim(4), Some(6));
        assert_eq!(RepDescriptor::Sym(3).dim(2), Some(4));
        assert_eq!(
            RepDescriptor::Tensor(vec![RepDescriptor::Standard, RepDescriptor::Dual]).dim(3),
            Some(9)
        );
    }

    #[test]
    fn cap_is_enforced() {
        let err = RepDescriptor::Sym(6).validate(15, 20_000).unwrap_err();
        assert!(matches!(err, RepsError::DimensionOverflow { .. }));
    }

    #[test]
    fn garbage_is_rejected() {
        assert!(RepDescriptor::parse("sym").is_err());
        assert!(RepDescriptor::parse("tensor(std").is_err());
        assert!(RepDescriptor::parse("wedge:2").is_err());
    }
}

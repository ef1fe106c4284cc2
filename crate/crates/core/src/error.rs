use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("extension degree {0} outside the supported range 1..=20")]
    FieldDegree(u32),
    #[error("operands live in different fields (F_2^{0} vs F_2^{1})")]
    MixedFields(u32, u32),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("value {value} is not an element of F_2^{r}")]
    NotAnElement { value: u32, r: u32 },
    #[error("subfield degree {sub} does not divide extension degree {r}")]
    NonDivisibleDegree { sub: u32, r: u32 },
    #[error("field F_2^{0} is not of the form 2^(2m+1), no Tits endomorphism")]
    NotTitsField(u32),

    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("subgroup of order {order} is too large to enumerate (limit {limit})")]
    TooLarge { order: u128, limit: u128 },
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("involution {involution:?} fixes {fixed} points, expected exactly one")]
    ConditionFour { involution: Vec<u32>, fixed: usize },
    #[error("group has odd order, no involutions")]
    OddOrder,
    #[error("search failed: {0}")]
    SearchFailed(String),

    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid ramification profile: {0}")]
    InvalidProfile(String),
    #[error("genus computation is not integral: {0}")]
    NonIntegral(String),
    #[error("negative genus {0}: inadmissible data")]
    NegativeGenus(i128),
    #[error("group order {0} is not a power of 2")]
    NotPGroup(u128),
    #[error("degenerate Artin-Schreier cover (constant right-hand side)")]
    DegenerateCover,
    #[error("cover is not reduced: pole of even order {0}")]
    NotReduced(u64),
    #[error("polynomial error: {0}")]
    Poly(String),
    #[error("cross-check mismatch: {0}")]
    Mismatch(String),

    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ray {0} is not primitive")]
    NonPrimitiveRay(usize),
    #[error("ray {0} duplicates an earlier ray")]
    DuplicateRay(usize),
    #[error("cone {0} does not have exactly dim rays")]
    BadConeSize(usize),
    #[error("cone {0} generators are linearly dependent")]
    DependentCone(usize),
    #[error("cones {0} and {1} do not meet in a common face")]
    FaceIntersectionViolation(usize, usize),
    #[error("ray {0} appears in no maximal cone")]
    UnusedRay(usize),
    #[error("generators are linearly dependent")]
    DependentGenerators,
    #[error("rays do not span the ambient lattice")]
    NotSpanning,
    #[error("subdivision ray equals an existing ray")]
    RayAlreadyPresent,
    #[error("subdivision ray lies in no cone of the fan")]
    RayOutsideSupport,
    #[error("image of ray {0} under the quotient projection is zero or non-primitive")]
    NonPrimitiveImage(usize),
    #[error("cone image is not full-dimensional in the quotient")]
    CollapsedCone,
    #[error("sum of a primitive collection lies in no cone of the fan")]
    SumNotLocated,
    #[error("fan is not complete")]
    NotComplete,
    #[error("expected a relation of shape x1 + x2 = 2x")]
    BadRelationShape,
    #[error("operation requires all relation degrees nonnegative with at least one zero")]
    NotWeakFano,
    #[error("interior rays fall in neither side class (ray {0})")]
    DichotomyViolated(usize),
    #[error("deformed ray data is invalid: {0}")]
    DeformedFanInvalid(String),
    #[error("deformed ray collides with ray {0}")]
    NewRayCollision(usize),
    #[error("collections do not split over the chosen ray partition")]
    NoBundleSplit,
    #[error("unknown catalog name: {0}")]
    UnknownName(String),
    #[error("relation index {0} out of range")]
    RelationIndex(usize),
    #[error("{0}")]
    InvalidInput(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

use crate::kernel::Point;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("segments {0} and {1} cross or overlap")]
    CrossingSegments(usize, usize),
    #[error("segment {0} has zero length")]
    ZeroLength(usize),
    #[error("viewpoint {0} lies on segment {1}")]
    ViewpointOnSegment(Box<Point>, usize),
    #[error("viewpoint {point} is not in general position: {reason}")]
    NotGeneralPosition { point: Box<Point>, reason: String },
    #[error("target crosses scene segment {0}")]
    CrossingTarget(usize),
    #[error("query point {0} lies on a subdivision boundary")]
    BoundaryQuery(Box<Point>),
    #[error("scene generation failed: {0}")]
    Generation(String),
    #[error("invalid argument: {0}")]
    Domain(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A dynamic-programming entry: a reachable energy level or minus infinity.
///
/// The unreachable marker is never fed to arithmetic; callers go through
/// [`Level::get`] and operate on `Option<i64>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Level(i64);

impl Level {
    pub const UNREACHABLE: Level = Level(i64::MIN);

    pub fn from_option(value: Option<i64>) -> Level {
        match value {
            Some(v) => {
                debug_assert!(v != i64::MIN);
                Level(v)
            }
            None => Level::UNREACHABLE,
        }
    }

    pub fn get(self) -> Option<i64> {
        (self != Level::UNREACHABLE).then_some(self.0)
    }
}

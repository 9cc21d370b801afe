//! Wall-clock access. `std::time::Instant` panics on `wasm32-unknown-unknown`, where
//! this falls back to a clock that never advances (no timeouts, zero durations).

#[cfg(not(all(target_arch = "wasm32", target_os = "unknown")))]
pub use std::time::Instant;

#[cfg(all(target_arch = "wasm32", target_os = "unknown"))]
mod frozen {
    use std::time::Duration;

    #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
    pub struct Instant;

    impl Instant {
        pub fn now() -> Self {
            Instant
        }

        pub fn elapsed(&self) -> Duration {
            Duration::ZERO
        }
    }

    impl std::ops::Add<Duration> for Instant {
        type Output = Instant;

        fn add(self, _: Duration) -> Instant {
            Instant
        }
    }
}

#[cfg(all(target_arch = "wasm32", target_os = "unknown"))]
pub use frozen::Instant;

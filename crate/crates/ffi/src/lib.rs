//! C interface to `latinwalk`.
//!
//! Every function returns an [`LwStatus`] and writes results through out
//! pointers. Objects are opaque handles released with their `_free`
//! function; strings returned by the library are released with
//! [`lw_string_free`]. After a failing call, [`lw_last_error`] describes the
//! failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use latinwalk::chain::{ChainConfig, RngStream, Sampler};
use latinwalk::connect::transform_path;
use latinwalk::moves::{apply_in_place, IntercalateMove, MoveSequence};
use latinwalk::square::SquareState;
use latinwalk::{format, Error};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    InvalidSquare = 4,
    InvalidMove = 5,
    OrderMismatch = 6,
    Internal = 7,
}

/// A proper or improper Latin square.
pub struct LwSquare(SquareState);

/// A validated sequence of moves with its start and end squares.
pub struct LwMoveSequence(MoveSequence);

/// One chain of the square sampler.
pub struct LwSampler(Sampler);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: LwStatus, msg: impl AsRef<str>) -> LwStatus {
    set_error(msg.as_ref());
    status
}

fn from_error(e: Error) -> LwStatus {
    let status = match e {
        Error::Parse { .. } => LwStatus::ParseError,
        Error::InvalidSquare(_) => LwStatus::InvalidSquare,
        Error::InvalidMove(_) => LwStatus::InvalidMove,
        Error::OrderMismatch(..) => LwStatus::OrderMismatch,
        Error::DegenerateOrder(_) | Error::TooLarge { .. } | Error::PreconditionViolated(_) => {
            LwStatus::InvalidArgument
        }
        _ => LwStatus::Internal,
    };
    fail(status, e.to_string())
}

/// Runs `f`, turning panics into `Internal`.
fn guard<F: FnOnce() -> LwStatus>(f: F) -> LwStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(LwStatus::Internal, "internal panic"))
}

macro_rules! deref {
    ($p:expr) => {
        match unsafe { $p.as_ref() } {
            Some(v) => v,
            None => return fail(LwStatus::NullPointer, concat!(stringify!($p), " is null")),
        }
    };
    (mut $p:expr) => {
        match unsafe { $p.as_mut() } {
            Some(v) => v,
            None => return fail(LwStatus::NullPointer, concat!(stringify!($p), " is null")),
        }
    };
}

fn put<T>(out: *mut T, value: T) -> LwStatus {
    if out.is_null() {
        return fail(LwStatus::NullPointer, "output pointer is null");
    }
    unsafe { out.write(value) };
    LwStatus::Ok
}

/// Message for the most recent failure on this thread, or an empty string.
/// Valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn lw_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses one square in the text or JSON form.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lw_square_parse(text: *const c_char, out: *mut *mut LwSquare) -> LwStatus {
    guard(|| {
        if text.is_null() {
            return fail(LwStatus::NullPointer, "text is null");
        }
        let Ok(s) = unsafe { CStr::from_ptr(text) }.to_str() else {
            return fail(LwStatus::ParseError, "text is not UTF-8");
        };
        match format::parse_state(s) {
            Ok(state) => put(out, Box::into_raw(Box::new(LwSquare(state)))),
            Err(e) => from_error(e),
        }
    })
}

/// The square with `(i + j) mod n` in cell `(i, j)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lw_square_cyclic(n: usize, out: *mut *mut LwSquare) -> LwStatus {
    guard(|| {
        if n == 0 || n > latinwalk::square::MAX_ORDER {
            return fail(LwStatus::InvalidArgument, format!("order {n} out of range"));
        }
        put(
            out,
            Box::into_raw(Box::new(LwSquare(SquareState::cyclic(n)))),
        )
    })
}

/// # Safety
/// `sq` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lw_square_clone(sq: *const LwSquare, out: *mut *mut LwSquare) -> LwStatus {
    let s = deref!(sq);
    put(out, Box::into_raw(Box::new(LwSquare(s.0.clone()))))
}

/// # Safety
/// `sq` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lw_square_free(sq: *mut LwSquare) {
    if !sq.is_null() {
        drop(unsafe { Box::from_raw(sq) });
    }
}

/// # Safety
/// `sq` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lw_square_order(sq: *const LwSquare, out: *mut usize) -> LwStatus {
    put(out, deref!(sq).0.order())
}

/// # Safety
/// `sq` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lw_square_is_proper(sq: *const LwSquare, out: *mut bool) -> LwStatus {
    put(out, deref!(sq).0.is_proper())
}

/// Symbol in cell `(row, col)`, or `-1` for the improper cell.
///
/// # Safety
/// `sq` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lw_square_symbol(
    sq: *const LwSquare,
    row: usize,
    col: usize,
    out: *mut i32,
) -> LwStatus {
    let s = &deref!(sq).0;
    if row >= s.order() || col >= s.order() {
        return fail(
            LwStatus::InvalidArgument,
            format!("cell ({row},{col}) out of range"),
        );
    }
    put(out, s.symbol(row, col).map_or(-1, |v| v as i32))
}

/// Text form of the square; release with [`lw_string_free`].
///
/// # Safety
/// `sq` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lw_square_to_text(sq: *const LwSquare, out: *mut *mut c_char) -> LwStatus {
    let s = deref!(sq);
    let text = format::square_to_text(&s.0.to_grid());
    put(
        out,
        CString::new(text)
            .expect("no NUL in square text")
            .into_raw(),
    )
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Applies the `((i,j;a),(i2,j2;b))` move in place. On failure the square is
/// unchanged.
///
/// # Safety
/// `sq` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn lw_square_apply_move(
    sq: *mut LwSquare,
    i: usize,
    j: usize,
    a: usize,
    i2: usize,
    j2: usize,
    b: usize,
) -> LwStatus {
    let s = deref!(mut sq);
    guard(|| {
        match IntercalateMove::new(i, j, a, i2, j2, b).and_then(|m| apply_in_place(&mut s.0, &m)) {
            Ok(()) => LwStatus::Ok,
            Err(e) => from_error(e),
        }
    })
}

/// Squares are equal as cubes.
///
/// # Safety
/// Both handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lw_square_equal(
    a: *const LwSquare,
    b: *const LwSquare,
    out: *mut bool,
) -> LwStatus {
    put(out, deref!(a).0 == deref!(b).0)
}

/// A move sequence from `a` to `b`.
///
/// # Safety
/// Both handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lw_transform_path(
    a: *const LwSquare,
    b: *const LwSquare,
    out: *mut *mut LwMoveSequence,
) -> LwStatus {
    let (a, b) = (deref!(a), deref!(b));
    guard(|| match transform_path(&a.0, &b.0) {
        Ok(seq) => put(out, Box::into_raw(Box::new(LwMoveSequence(seq)))),
        Err(e) => from_error(e),
    })
}

/// # Safety
/// `seq` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lw_moveseq_len(seq: *const LwMoveSequence, out: *mut usize) -> LwStatus {
    put(out, deref!(seq).0.len())
}

/// Move `index` as `{i, j, a, i2, j2, b}` in canonical form.
///
/// # Safety
/// `seq` must be a live handle and `out` must point to 6 writable values.
#[no_mangle]
pub unsafe extern "C" fn lw_moveseq_get(
    seq: *const LwMoveSequence,
    index: usize,
    out: *mut usize,
) -> LwStatus {
    let s = &deref!(seq).0;
    let Some(m) = s.moves().get(index) else {
        return fail(
            LwStatus::InvalidArgument,
            format!("index {index} out of range"),
        );
    };
    if out.is_null() {
        return fail(LwStatus::NullPointer, "output pointer is null");
    }
    let (i, i2) = m.rows();
    let (j, j2) = m.cols();
    let (a, b) = m.symbols();
    let vals = [i, j, a, i2, j2, b];
    unsafe { ptr::copy_nonoverlapping(vals.as_ptr(), out, 6) };
    LwStatus::Ok
}

/// Final square of the sequence, as a new handle.
///
/// # Safety
/// `seq` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lw_moveseq_end(
    seq: *const LwMoveSequence,
    out: *mut *mut LwSquare,
) -> LwStatus {
    let s = deref!(seq);
    put(out, Box::into_raw(Box::new(LwSquare(s.0.end().clone()))))
}

/// # Safety
/// `seq` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lw_moveseq_free(seq: *mut LwMoveSequence) {
    if !seq.is_null() {
        drop(unsafe { Box::from_raw(seq) });
    }
}

/// Sampler with the default burn-in (`10 n^3` steps) and thinning (`n^3`
/// proper visits).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lw_sampler_new(n: usize, seed: u64, out: *mut *mut LwSampler) -> LwStatus {
    let cfg = ChainConfig::new(n, seed);
    unsafe { lw_sampler_new_with(n, seed, cfg.burn_in, cfg.thin, out) }
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lw_sampler_new_with(
    n: usize,
    seed: u64,
    burn_in: u64,
    thin: u64,
    out: *mut *mut LwSampler,
) -> LwStatus {
    guard(|| {
        if n == 0 || n > latinwalk::square::MAX_ORDER {
            return fail(LwStatus::InvalidArgument, format!("order {n} out of range"));
        }
        let cfg = ChainConfig::new(n, seed)
            .with_burn_in(burn_in)
            .with_thin(thin);
        match Sampler::new(cfg, RngStream::new(seed)) {
            Ok(s) => put(out, Box::into_raw(Box::new(LwSampler(s)))),
            Err(e) => from_error(e),
        }
    })
}

/// Next recorded proper square, as a new handle.
///
/// # Safety
/// `sampler` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lw_sampler_next(
    sampler: *mut LwSampler,
    out: *mut *mut LwSquare,
) -> LwStatus {
    let s = deref!(mut sampler);
    if out.is_null() {
        return fail(LwStatus::NullPointer, "output pointer is null");
    }
    guard(|| {
        let grid = s.0.next_square();
        match latinwalk::square::cube_from_grid(&grid) {
            Ok(state) => put(out, Box::into_raw(Box::new(LwSquare(state)))),
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `sampler` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lw_sampler_free(sampler: *mut LwSampler) {
    if !sampler.is_null() {
        drop(unsafe { Box::from_raw(sampler) });
    }
}

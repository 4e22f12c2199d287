//! C ABI for the dyadic-sparse toolkit.
//!
//! Objects cross the boundary as opaque handles created by `ds_*_new`-style
//! functions and released with the matching `ds_*_free`. Every fallible call
//! returns a [`DsStatus`]; on failure the message is available from
//! [`ds_last_error_message`] on the same thread. Panics never unwind into C.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dyadic_sparse::experiments::{run_command, ExperimentConfig};
use dyadic_sparse::grid::{DyadicCube, FunctionSequence, Geometry, GridBox, GridFunction};
use dyadic_sparse::maximal::{hl_maximal, orlicz_maximal};
use dyadic_sparse::orlicz::{luxemburg_norm, OrliczParams};
use dyadic_sparse::singular::sharpness::sharpness_norms;
use dyadic_sparse::singular::{Amplitude, SphericalKernel, TaOperator};
use dyadic_sparse::sparse::{build_sparse_family, sparse_operator, SparseConfig, SparseFamily};
use dyadic_sparse::weights::{a1_constant, ainf_constant, ap_constant, Weight};
use dyadic_sparse::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DsStatus {
    Ok = 0,
    NullPointer = 1,
    Parameter = 2,
    Alignment = 3,
    Resolution = 4,
    Coverage = 5,
    NonConvergence = 6,
    Construction = 7,
    Budget = 8,
    Format = 9,
    Io = 10,
    BufferTooSmall = 11,
    Panic = 12,
}

impl From<&Error> for DsStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Parameter(_) => DsStatus::Parameter,
            Error::Alignment(_) => DsStatus::Alignment,
            Error::Resolution(_) => DsStatus::Resolution,
            Error::Coverage(_) => DsStatus::Coverage,
            Error::NonConvergence(_) => DsStatus::NonConvergence,
            Error::Construction(_) => DsStatus::Construction,
            Error::Budget(_) => DsStatus::Budget,
            Error::Format(_) => DsStatus::Format,
            Error::Io(_) => DsStatus::Io,
        }
    }
}

/// Output format of [`ds_run_experiment`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DsFormat {
    Csv = 0,
    Json = 1,
}

/// A cube of a sparse family.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DsCube {
    /// Shifted grid, one base-3 digit per axis.
    pub grid: u8,
    pub level: u32,
    pub index: [i64; 2],
    /// `|E_Q| / |Q|` for the witness set of the cube.
    pub witness_fraction: f64,
}

/// Norms of the power-weight lower-bound example.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DsSharpness {
    pub f_norm_pow: f64,
    pub f_norm: f64,
    pub ta_norm: f64,
    pub ratio: f64,
    pub unresolved: f64,
}

/// Opaque sampled function on a uniform grid.
pub struct DsGridFunction(GridFunction);

/// Opaque weight.
pub struct DsWeight(Weight);

/// Opaque sparse family.
pub struct DsSparseFamily(SparseFamily);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

enum Failure {
    Status(DsStatus, String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type FfiResult<T> = std::result::Result<T, Failure>;

fn null() -> Failure {
    Failure::Status(DsStatus::NullPointer, "null pointer argument".into())
}

fn guard(body: impl FnOnce() -> FfiResult<()>) -> DsStatus {
    let (status, msg) = match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => (DsStatus::Ok, String::new()),
        Ok(Err(Failure::Status(s, m))) => (s, m),
        Ok(Err(Failure::Core(e))) => (DsStatus::from(&e), e.to_string()),
        Err(_) => (DsStatus::Panic, "internal panic".into()),
    };
    set_last_error(&msg);
    status
}

unsafe fn slice<'a, T>(data: *const T, len: usize) -> FfiResult<&'a [T]> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null());
    }
    Ok(std::slice::from_raw_parts(data, len))
}

unsafe fn text<'a>(s: *const c_char) -> FfiResult<&'a str> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s).to_str().map_err(|_| Failure::Status(DsStatus::Format, "string is not valid UTF-8".into()))
}

unsafe fn handle<'a, T>(h: *const T) -> FfiResult<&'a T> {
    h.as_ref().ok_or_else(null)
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> FfiResult<()> {
    if out.is_null() {
        return Err(null());
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn geometry(dim: usize, lower: *const f64, side: f64, depth: u32) -> FfiResult<Geometry> {
    let lower = slice(lower, dim)?;
    Ok(Geometry::new(GridBox::new(dim, lower, side)?, depth)?)
}

/// Message of the last failed call on this thread, or an empty string.
/// The pointer stays valid until the next call into this library on the
/// same thread.
#[no_mangle]
pub extern "C" fn ds_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Creates a function with `len = 2^(dim*depth)` cell values, row-major, on
/// the box with corner `lower[0..dim]` and side `side`.
///
/// # Safety
/// `lower` must point to `dim` doubles, `values` to `len` doubles and `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn ds_function_new(
    dim: usize,
    lower: *const f64,
    side: f64,
    depth: u32,
    values: *const f64,
    len: usize,
    out: *mut *mut DsGridFunction,
) -> DsStatus {
    guard(|| {
        let geom = geometry(dim, lower, side, depth)?;
        let f = GridFunction::new(geom, slice(values, len)?.to_vec())?;
        put(out, DsGridFunction(f))
    })
}

/// # Safety
/// `f` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ds_function_free(f: *mut DsGridFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Number of cells, or 0 for a null handle.
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ds_function_len(f: *const DsGridFunction) -> usize {
    f.as_ref().map_or(0, |f| f.0.values().len())
}

/// Copies the cell values into `buf`, which must hold at least
/// [`ds_function_len`] doubles.
///
/// # Safety
/// `f` must be a live handle and `buf` must point to `cap` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ds_function_values(f: *const DsGridFunction, buf: *mut f64, cap: usize) -> DsStatus {
    guard(|| {
        let v = handle(f)?.0.values();
        if cap < v.len() {
            return Err(Failure::Status(
                DsStatus::BufferTooSmall,
                format!("buffer holds {cap} values, {} needed", v.len()),
            ));
        }
        if buf.is_null() {
            return Err(null());
        }
        ptr::copy_nonoverlapping(v.as_ptr(), buf, v.len());
        Ok(())
    })
}

/// Hardy-Littlewood maximal function over the shifted dyadic grids.
///
/// # Safety
/// `f` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ds_hl_maximal(f: *const DsGridFunction, out: *mut *mut DsGridFunction) -> DsStatus {
    guard(|| put(out, DsGridFunction(hl_maximal(&handle(f)?.0))))
}

/// `L(log L)^beta` maximal function.
///
/// # Safety
/// `f` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ds_orlicz_maximal(
    f: *const DsGridFunction,
    beta: f64,
    out: *mut *mut DsGridFunction,
) -> DsStatus {
    guard(|| {
        let params = OrliczParams::new(beta)?;
        put(out, DsGridFunction(orlicz_maximal(&handle(f)?.0, &params)?))
    })
}

/// Luxemburg `L(log L)^beta` average of `f` over a dyadic cube.
///
/// # Safety
/// `f` must be a live handle, `index` must point to as many values as the
/// function has axes and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ds_luxemburg_norm(
    f: *const DsGridFunction,
    grid: u8,
    level: u32,
    index: *const i64,
    beta: f64,
    out: *mut f64,
) -> DsStatus {
    guard(|| {
        let f = &handle(f)?.0;
        let cube = DyadicCube::new(grid, level, slice(index, f.geometry().dim())?);
        let v = luxemburg_norm(f, &cube, beta)?;
        *out.as_mut().ok_or_else(null)? = v;
        Ok(())
    })
}

/// `T_A f` (principal value) or, when `maximal` is true, the maximal
/// truncation `T_A^* f`, for the named kernel and amplitude presets.
///
/// # Safety
/// `f` must be a live handle, the strings NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ds_commutator(
    f: *const DsGridFunction,
    omega: *const c_char,
    amplitude: *const c_char,
    maximal: bool,
    out: *mut *mut DsGridFunction,
) -> DsStatus {
    guard(|| {
        let f = &handle(f)?.0;
        let op = operator(f.geometry(), omega, amplitude)?;
        let g = if maximal { op.t_a_star(f)? } else { op.t_a(f, f64::INFINITY)?.value };
        put(out, DsGridFunction(g))
    })
}

unsafe fn operator(geom: &Geometry, omega: *const c_char, amplitude: *const c_char) -> FfiResult<TaOperator> {
    let dim = geom.dim();
    let kernel = SphericalKernel::preset(text(omega)?, dim)?;
    let amp = Amplitude::preset(text(amplitude)?, dim)?;
    Ok(TaOperator::new(*geom, kernel, amp)?)
}

/// Power weight `|x - center|^exponent` on the given grid.
///
/// # Safety
/// `lower` and `center` must point to `dim` doubles and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn ds_weight_power(
    dim: usize,
    lower: *const f64,
    side: f64,
    depth: u32,
    center: *const f64,
    exponent: f64,
    out: *mut *mut DsWeight,
) -> DsStatus {
    guard(|| {
        let geom = geometry(dim, lower, side, depth)?;
        put(out, DsWeight(Weight::power(geom, slice(center, dim)?, exponent)?))
    })
}

/// Weight given by its cell values.
///
/// # Safety
/// `f` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ds_weight_sampled(f: *const DsGridFunction, out: *mut *mut DsWeight) -> DsStatus {
    guard(|| put(out, DsWeight(Weight::sampled(handle(f)?.0.clone())?)))
}

/// # Safety
/// `w` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ds_weight_free(w: *mut DsWeight) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// Weight characteristics over all shifted dyadic cubes of the grid:
/// `[w]_{A_p}`.
///
/// # Safety
/// `w` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ds_ap_constant(w: *const DsWeight, p: f64, out: *mut f64) -> DsStatus {
    guard(|| {
        let w = &handle(w)?.0;
        let v = ap_constant(w, p, w.geometry().depth())?;
        *out.as_mut().ok_or_else(null)? = v;
        Ok(())
    })
}

/// Fujii-Wilson `[w]_{A_inf}`.
///
/// # Safety
/// `w` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ds_ainf_constant(w: *const DsWeight, out: *mut f64) -> DsStatus {
    guard(|| {
        let w = &handle(w)?.0;
        let v = ainf_constant(w, w.geometry().depth())?;
        *out.as_mut().ok_or_else(null)? = v;
        Ok(())
    })
}

/// `[w]_{A_1}`.
///
/// # Safety
/// `w` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ds_a1_constant(w: *const DsWeight, out: *mut f64) -> DsStatus {
    guard(|| {
        let w = &handle(w)?.0;
        let v = a1_constant(w, w.geometry().depth())?;
        *out.as_mut().ok_or_else(null)? = v;
        Ok(())
    })
}

/// Sparse family dominating the commutator on `functions[0..count]`, built
/// from the whole box. `c2_initial <= 0` selects the default threshold.
///
/// # Safety
/// `functions` must point to `count` live handles sharing one grid, the
/// strings must be NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ds_sparse_build(
    functions: *const *const DsGridFunction,
    count: usize,
    omega: *const c_char,
    amplitude: *const c_char,
    q: f64,
    beta: f64,
    c2_initial: f64,
    out: *mut *mut DsSparseFamily,
) -> DsStatus {
    guard(|| {
        let items =
            slice(functions, count)?.iter().map(|&h| Ok(handle(h)?.0.clone())).collect::<FfiResult<Vec<_>>>()?;
        let fs = FunctionSequence::new(items)?;
        let geom = *fs.geometry();
        let op = operator(&geom, omega, amplitude)?;
        let mut config = SparseConfig::new(q, beta)?;
        config.c2_initial = (c2_initial > 0.0).then_some(c2_initial);
        let root = DyadicCube::standard(0, &[0, 0][..geom.dim()]);
        put(out, DsSparseFamily(build_sparse_family(&op, &fs, &root, &config)?))
    })
}

/// # Safety
/// `family` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ds_sparse_free(family: *mut DsSparseFamily) {
    if !family.is_null() {
        drop(Box::from_raw(family));
    }
}

/// Number of cubes, or 0 for a null handle.
///
/// # Safety
/// `family` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ds_sparse_len(family: *const DsSparseFamily) -> usize {
    family.as_ref().map_or(0, |f| f.0.len())
}

/// The `i`-th cube in level-major order.
///
/// # Safety
/// `family` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ds_sparse_cube(family: *const DsSparseFamily, i: usize, out: *mut DsCube) -> DsStatus {
    guard(|| {
        let cubes = handle(family)?.0.cubes();
        let c = cubes.get(i).ok_or_else(|| {
            Failure::Status(DsStatus::Parameter, format!("cube {i} requested from a family of {}", cubes.len()))
        })?;
        *out.as_mut().ok_or_else(null)? = DsCube {
            grid: c.cube.grid,
            level: c.cube.level,
            index: c.cube.index,
            witness_fraction: c.witness_fraction(),
        };
        Ok(())
    })
}

/// Sparse Orlicz operator `sum_Q ||f||_{L(log L)^beta, 3Q} chi_Q`.
///
/// # Safety
/// Both handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ds_sparse_apply(
    family: *const DsSparseFamily,
    f: *const DsGridFunction,
    beta: f64,
    out: *mut *mut DsGridFunction,
) -> DsStatus {
    guard(|| {
        let params = OrliczParams::new(beta)?;
        put(out, DsGridFunction(sparse_operator(&handle(family)?.0, &handle(f)?.0, &params)?))
    })
}

/// Norms of the power-weight example `f = x^(delta-1) chi_(0,1)` on a
/// logarithmic grid of the given depth.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ds_sharpness_norms(
    p: f64,
    delta: f64,
    depth: u32,
    unresolved_tol: f64,
    out: *mut DsSharpness,
) -> DsStatus {
    guard(|| {
        let s = sharpness_norms(p, delta, depth, unresolved_tol)?;
        *out.as_mut().ok_or_else(null)? = DsSharpness {
            f_norm_pow: s.f_norm_pow,
            f_norm: s.f_norm,
            ta_norm: s.ta_norm,
            ratio: s.ratio,
            unresolved: s.unresolved,
        };
        Ok(())
    })
}

/// Runs a named experiment. `config_json` is a JSON object whose absent
/// fields take their defaults (null means all defaults). The table is
/// returned in `*out` and must be released with [`ds_string_free`].
///
/// # Safety
/// `command` must be NUL-terminated, `config_json` null or NUL-terminated
/// and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ds_run_experiment(
    command: *const c_char,
    config_json: *const c_char,
    format: DsFormat,
    out: *mut *mut c_char,
) -> DsStatus {
    guard(|| {
        let cfg = if config_json.is_null() {
            ExperimentConfig::default()
        } else {
            ExperimentConfig::from_json(text(config_json)?)?
        };
        let report = run_command(text(command)?, &cfg)?;
        let table = match format {
            DsFormat::Csv => report.to_csv(),
            DsFormat::Json => report.to_json(),
        };
        if out.is_null() {
            return Err(null());
        }
        *out = CString::new(table).unwrap_or_default().into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ds_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

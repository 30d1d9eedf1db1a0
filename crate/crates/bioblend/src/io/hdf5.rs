//! HDF5 reader and writer on top of the system HDF5 C library.
//!
//! Only the handful of C entry points the dataset layout needs are bound.
//! The serial library is not thread-safe, so every call happens under
//! one process-wide lock. Object modification times are switched off so
//! identical bundles produce identical bytes.

use std::ffi::{c_char, c_int, c_uint, c_void, CString};
use std::path::{Path, PathBuf};
use std::sync::{Mutex, Once};

use ndarray::Array2;

use super::DatasetBundle;
use crate::blend::BlendWeights;
use crate::config::{ConfigValue, GeneratorConfig};
use crate::error::{Error, Result};

/// `MAJOR.MINOR`; readers refuse files with a newer major version.
pub const FORMAT_VERSION: &str = "1.0";

#[allow(non_camel_case_types, non_upper_case_globals, dead_code)]
mod ffi {
    use super::*;

    pub type hid_t = i64;
    pub type herr_t = c_int;
    pub type htri_t = c_int;
    pub type hsize_t = u64;

    pub const H5P_DEFAULT: hid_t = 0;
    pub const H5S_ALL: hid_t = 0;
    pub const H5E_DEFAULT: hid_t = 0;
    pub const H5S_SCALAR: c_int = 0;
    pub const H5F_ACC_RDONLY: c_uint = 0x0000;
    pub const H5F_ACC_TRUNC: c_uint = 0x0002;
    pub const H5T_STRING: c_int = 3;

    pub type H5E_auto2_t = Option<unsafe extern "C" fn(hid_t, *mut c_void) -> herr_t>;

    extern "C" {
        pub fn H5open() -> herr_t;
        pub fn H5Eclear2(estack_id: hid_t) -> herr_t;
        pub fn H5Eset_auto2(estack_id: hid_t, func: H5E_auto2_t, client_data: *mut c_void) -> herr_t;

        pub fn H5Fcreate(filename: *const c_char, flags: c_uint, fcpl: hid_t, fapl: hid_t) -> hid_t;
        pub fn H5Fopen(filename: *const c_char, flags: c_uint, fapl: hid_t) -> hid_t;
        pub fn H5Fclose(file_id: hid_t) -> herr_t;

        pub fn H5Gcreate2(loc: hid_t, name: *const c_char, lcpl: hid_t, gcpl: hid_t, gapl: hid_t) -> hid_t;
        pub fn H5Gopen2(loc: hid_t, name: *const c_char, gapl: hid_t) -> hid_t;
        pub fn H5Gclose(group_id: hid_t) -> herr_t;

        pub fn H5Lexists(loc: hid_t, name: *const c_char, lapl: hid_t) -> htri_t;

        pub fn H5Screate(kind: c_int) -> hid_t;
        pub fn H5Screate_simple(rank: c_int, dims: *const hsize_t, maxdims: *const hsize_t) -> hid_t;
        pub fn H5Sget_simple_extent_ndims(space_id: hid_t) -> c_int;
        pub fn H5Sget_simple_extent_dims(space_id: hid_t, dims: *mut hsize_t, maxdims: *mut hsize_t) -> c_int;
        pub fn H5Sclose(space_id: hid_t) -> herr_t;

        pub fn H5Pcreate(cls_id: hid_t) -> hid_t;
        pub fn H5Pset_obj_track_times(plist: hid_t, track_times: bool) -> herr_t;
        pub fn H5Pclose(plist: hid_t) -> herr_t;

        pub fn H5Dcreate2(
            loc: hid_t,
            name: *const c_char,
            type_id: hid_t,
            space_id: hid_t,
            lcpl: hid_t,
            dcpl: hid_t,
            dapl: hid_t,
        ) -> hid_t;
        pub fn H5Dopen2(loc: hid_t, name: *const c_char, dapl: hid_t) -> hid_t;
        pub fn H5Dget_space(dset_id: hid_t) -> hid_t;
        pub fn H5Dwrite(dset: hid_t, mem_type: hid_t, mem_space: hid_t, file_space: hid_t, xfer: hid_t, buf: *const c_void) -> herr_t;
        pub fn H5Dread(dset: hid_t, mem_type: hid_t, mem_space: hid_t, file_space: hid_t, xfer: hid_t, buf: *mut c_void) -> herr_t;
        pub fn H5Dclose(dset_id: hid_t) -> herr_t;

        pub fn H5Acreate2(loc: hid_t, name: *const c_char, type_id: hid_t, space_id: hid_t, acpl: hid_t, aapl: hid_t) -> hid_t;
        pub fn H5Aopen(obj: hid_t, name: *const c_char, aapl: hid_t) -> hid_t;
        pub fn H5Aexists(obj: hid_t, name: *const c_char) -> htri_t;
        pub fn H5Aget_type(attr_id: hid_t) -> hid_t;
        pub fn H5Awrite(attr_id: hid_t, mem_type: hid_t, buf: *const c_void) -> herr_t;
        pub fn H5Aread(attr_id: hid_t, mem_type: hid_t, buf: *mut c_void) -> herr_t;
        pub fn H5Aclose(attr_id: hid_t) -> herr_t;

        pub fn H5Tcopy(type_id: hid_t) -> hid_t;
        pub fn H5Tset_size(type_id: hid_t, size: usize) -> herr_t;
        pub fn H5Tget_size(type_id: hid_t) -> usize;
        pub fn H5Tget_class(type_id: hid_t) -> c_int;
        pub fn H5Tclose(type_id: hid_t) -> herr_t;

        pub static H5T_IEEE_F64LE_g: hid_t;
        pub static H5T_STD_I64LE_g: hid_t;
        pub static H5T_STD_U64LE_g: hid_t;
        pub static H5T_STD_U8LE_g: hid_t;
        pub static H5T_NATIVE_DOUBLE_g: hid_t;
        pub static H5T_NATIVE_INT64_g: hid_t;
        pub static H5T_NATIVE_UINT64_g: hid_t;
        pub static H5T_NATIVE_UINT8_g: hid_t;
        pub static H5T_C_S1_g: hid_t;
        pub static H5P_CLS_DATASET_CREATE_ID_g: hid_t;
        pub static H5P_CLS_GROUP_CREATE_ID_g: hid_t;
    }
}

use ffi::hid_t;

static LOCK: Mutex<()> = Mutex::new(());
static INIT: Once = Once::new();

fn init() {
    INIT.call_once(|| unsafe {
        ffi::H5open();
    });
    // Errors surface as return codes; keep the library from printing them.
    // Thread-safe builds keep this setting per thread.
    unsafe {
        ffi::H5Eset_auto2(ffi::H5E_DEFAULT, None, std::ptr::null_mut());
    }
}

/// Element types stored in the file, with their file and memory type ids.
#[derive(Clone, Copy)]
enum Elem {
    F64,
    I64,
    U64,
    U8,
}

impl Elem {
    fn file_type(self) -> hid_t {
        unsafe {
            match self {
                Elem::F64 => ffi::H5T_IEEE_F64LE_g,
                Elem::I64 => ffi::H5T_STD_I64LE_g,
                Elem::U64 => ffi::H5T_STD_U64LE_g,
                Elem::U8 => ffi::H5T_STD_U8LE_g,
            }
        }
    }

    fn mem_type(self) -> hid_t {
        unsafe {
            match self {
                Elem::F64 => ffi::H5T_NATIVE_DOUBLE_g,
                Elem::I64 => ffi::H5T_NATIVE_INT64_g,
                Elem::U64 => ffi::H5T_NATIVE_UINT64_g,
                Elem::U8 => ffi::H5T_NATIVE_UINT8_g,
            }
        }
    }
}

trait Element: Copy + Default {
    const ELEM: Elem;
}

impl Element for f64 {
    const ELEM: Elem = Elem::F64;
}
impl Element for i64 {
    const ELEM: Elem = Elem::I64;
}
impl Element for u64 {
    const ELEM: Elem = Elem::U64;
}
impl Element for u8 {
    const ELEM: Elem = Elem::U8;
}

/// An open HDF5 identifier, closed on drop.
struct Handle {
    id: hid_t,
    close: unsafe extern "C" fn(hid_t) -> ffi::herr_t,
}

impl Drop for Handle {
    fn drop(&mut self) {
        unsafe {
            (self.close)(self.id);
        }
    }
}

/// One open file plus the path used for error messages.
struct H5File {
    path: PathBuf,
    file: Handle,
}

fn cstr(s: &str) -> CString {
    CString::new(s).expect("HDF5 names contain no NUL bytes")
}

impl H5File {
    fn err(&self, what: impl Into<String>) -> Error {
        Error::Hdf5 { path: self.path.clone(), message: what.into() }
    }

    fn handle(&self, id: hid_t, close: unsafe extern "C" fn(hid_t) -> ffi::herr_t, what: impl FnOnce() -> String) -> Result<Handle> {
        if id < 0 {
            Err(self.err(what()))
        } else {
            Ok(Handle { id, close })
        }
    }

    fn check(&self, status: ffi::herr_t, what: impl FnOnce() -> String) -> Result<()> {
        if status < 0 {
            Err(self.err(what()))
        } else {
            Ok(())
        }
    }

    fn create(path: &Path) -> Result<Self> {
        let name = path_cstr(path)?;
        let id = unsafe { ffi::H5Fcreate(name.as_ptr(), ffi::H5F_ACC_TRUNC, ffi::H5P_DEFAULT, ffi::H5P_DEFAULT) };
        if id < 0 {
            return Err(Error::Hdf5 { path: path.to_owned(), message: "cannot create file".into() });
        }
        Ok(H5File { path: path.to_owned(), file: Handle { id, close: ffi::H5Fclose } })
    }

    fn open(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Err(Error::io(path, std::io::Error::from(std::io::ErrorKind::NotFound)));
        }
        let name = path_cstr(path)?;
        let id = unsafe { ffi::H5Fopen(name.as_ptr(), ffi::H5F_ACC_RDONLY, ffi::H5P_DEFAULT) };
        if id < 0 {
            return Err(Error::Format(format!("{} is not a readable HDF5 file", path.display())));
        }
        Ok(H5File { path: path.to_owned(), file: Handle { id, close: ffi::H5Fclose } })
    }

    fn untimed_plist(&self, class: hid_t) -> Result<Handle> {
        let plist = self.handle(unsafe { ffi::H5Pcreate(class) }, ffi::H5Pclose, || "H5Pcreate failed".into())?;
        self.check(unsafe { ffi::H5Pset_obj_track_times(plist.id, false) }, || "H5Pset_obj_track_times failed".into())?;
        Ok(plist)
    }

    fn create_group(&self, name: &str) -> Result<()> {
        let gcpl = self.untimed_plist(unsafe { ffi::H5P_CLS_GROUP_CREATE_ID_g })?;
        let c = cstr(name);
        let id = unsafe { ffi::H5Gcreate2(self.file.id, c.as_ptr(), ffi::H5P_DEFAULT, gcpl.id, ffi::H5P_DEFAULT) };
        self.handle(id, ffi::H5Gclose, || format!("cannot create group {name}")).map(drop)
    }

    fn write_dataset<T: Element>(&self, name: &str, dims: &[usize], data: &[T]) -> Result<()> {
        debug_assert_eq!(dims.iter().product::<usize>(), data.len());
        let dims: Vec<ffi::hsize_t> = dims.iter().map(|&d| d as ffi::hsize_t).collect();
        let space = self.handle(
            unsafe { ffi::H5Screate_simple(dims.len() as c_int, dims.as_ptr(), std::ptr::null()) },
            ffi::H5Sclose,
            || format!("cannot create dataspace for {name}"),
        )?;
        let dcpl = self.untimed_plist(unsafe { ffi::H5P_CLS_DATASET_CREATE_ID_g })?;
        let c = cstr(name);
        let dset = self.handle(
            unsafe {
                ffi::H5Dcreate2(self.file.id, c.as_ptr(), T::ELEM.file_type(), space.id, ffi::H5P_DEFAULT, dcpl.id, ffi::H5P_DEFAULT)
            },
            ffi::H5Dclose,
            || format!("cannot create dataset {name}"),
        )?;
        if data.is_empty() {
            return Ok(());
        }
        self.check(
            unsafe {
                ffi::H5Dwrite(dset.id, T::ELEM.mem_type(), ffi::H5S_ALL, ffi::H5S_ALL, ffi::H5P_DEFAULT, data.as_ptr().cast())
            },
            || format!("cannot write dataset {name}"),
        )
    }

    fn exists(&self, name: &str) -> bool {
        // Walk the path so a missing parent group is not an error.
        let mut prefix = String::new();
        for part in name.trim_start_matches('/').split('/') {
            prefix.push('/');
            prefix.push_str(part);
            let c = cstr(&prefix);
            if unsafe { ffi::H5Lexists(self.file.id, c.as_ptr(), ffi::H5P_DEFAULT) } <= 0 {
                return false;
            }
        }
        true
    }

    fn read_dataset<T: Element>(&self, name: &str) -> Result<(Vec<usize>, Vec<T>)> {
        if !self.exists(name) {
            return Err(Error::Format(format!("missing {name}")));
        }
        let c = cstr(name);
        let dset = self.handle(unsafe { ffi::H5Dopen2(self.file.id, c.as_ptr(), ffi::H5P_DEFAULT) }, ffi::H5Dclose, || {
            format!("cannot open dataset {name}")
        })?;
        let space = self.handle(unsafe { ffi::H5Dget_space(dset.id) }, ffi::H5Sclose, || format!("no dataspace for {name}"))?;
        let rank = unsafe { ffi::H5Sget_simple_extent_ndims(space.id) };
        if rank < 0 {
            return Err(self.err(format!("cannot read rank of {name}")));
        }
        let mut dims = vec![0 as ffi::hsize_t; rank as usize];
        unsafe { ffi::H5Sget_simple_extent_dims(space.id, dims.as_mut_ptr(), std::ptr::null_mut()) };
        let dims: Vec<usize> = dims.into_iter().map(|d| d as usize).collect();
        let mut data = vec![T::default(); dims.iter().product()];
        if !data.is_empty() {
            self.check(
                unsafe {
                    ffi::H5Dread(dset.id, T::ELEM.mem_type(), ffi::H5S_ALL, ffi::H5S_ALL, ffi::H5P_DEFAULT, data.as_mut_ptr().cast())
                },
                || format!("cannot read dataset {name}"),
            )?;
        }
        Ok((dims, data))
    }

    fn read_vector<T: Element>(&self, name: &str) -> Result<Vec<T>> {
        let (dims, data) = self.read_dataset(name)?;
        if dims.len() != 1 {
            return Err(Error::Format(format!("{name} has rank {}, expected 1", dims.len())));
        }
        Ok(data)
    }

    fn read_matrix(&self, name: &str) -> Result<Array2<f64>> {
        let (dims, data) = self.read_dataset::<f64>(name)?;
        if dims.len() != 2 {
            return Err(Error::Format(format!("{name} has rank {}, expected 2", dims.len())));
        }
        Array2::from_shape_vec((dims[0], dims[1]), data).map_err(|e| Error::Format(format!("{name}: {e}")))
    }

    fn object(&self, name: &str) -> Result<Handle> {
        if name == "/" {
            // Attributes on the file id land on the root group; the file
            // handle owns the id, so hand back one that never closes it.
            unsafe extern "C" fn no_close(_: hid_t) -> ffi::herr_t {
                0
            }
            return Ok(Handle { id: self.file.id, close: no_close });
        }
        let c = cstr(name);
        self.handle(unsafe { ffi::H5Gopen2(self.file.id, c.as_ptr(), ffi::H5P_DEFAULT) }, ffi::H5Gclose, || {
            format!("cannot open group {name}")
        })
    }

    fn write_attr<T: Element>(&self, object: &str, name: &str, value: T) -> Result<()> {
        let obj = self.object(object)?;
        let space = self.handle(unsafe { ffi::H5Screate(ffi::H5S_SCALAR) }, ffi::H5Sclose, || "H5Screate failed".into())?;
        let c = cstr(name);
        let attr = self.handle(
            unsafe { ffi::H5Acreate2(obj.id, c.as_ptr(), T::ELEM.file_type(), space.id, ffi::H5P_DEFAULT, ffi::H5P_DEFAULT) },
            ffi::H5Aclose,
            || format!("cannot create attribute {name}"),
        )?;
        self.check(
            unsafe { ffi::H5Awrite(attr.id, T::ELEM.mem_type(), (&value as *const T).cast()) },
            || format!("cannot write attribute {name}"),
        )
    }

    fn write_attr_str(&self, object: &str, name: &str, value: &str) -> Result<()> {
        let obj = self.object(object)?;
        let dtype = self.handle(unsafe { ffi::H5Tcopy(ffi::H5T_C_S1_g) }, ffi::H5Tclose, || "H5Tcopy failed".into())?;
        self.check(unsafe { ffi::H5Tset_size(dtype.id, value.len().max(1)) }, || "H5Tset_size failed".into())?;
        let space = self.handle(unsafe { ffi::H5Screate(ffi::H5S_SCALAR) }, ffi::H5Sclose, || "H5Screate failed".into())?;
        let c = cstr(name);
        let attr = self.handle(
            unsafe { ffi::H5Acreate2(obj.id, c.as_ptr(), dtype.id, space.id, ffi::H5P_DEFAULT, ffi::H5P_DEFAULT) },
            ffi::H5Aclose,
            || format!("cannot create attribute {name}"),
        )?;
        let mut buf = value.as_bytes().to_vec();
        buf.resize(value.len().max(1), 0);
        self.check(unsafe { ffi::H5Awrite(attr.id, dtype.id, buf.as_ptr().cast()) }, || {
            format!("cannot write attribute {name}")
        })
    }

    fn open_attr(&self, object: &str, name: &str) -> Result<(Handle, Handle)> {
        let obj = self.object(object)?;
        let c = cstr(name);
        if unsafe { ffi::H5Aexists(obj.id, c.as_ptr()) } <= 0 {
            let at = if object == "/" { String::new() } else { object.to_owned() };
            return Err(Error::Format(format!("missing attribute {at}@{name}")));
        }
        let attr = self.handle(unsafe { ffi::H5Aopen(obj.id, c.as_ptr(), ffi::H5P_DEFAULT) }, ffi::H5Aclose, || {
            format!("cannot open attribute {name}")
        })?;
        Ok((obj, attr))
    }

    fn read_attr<T: Element>(&self, object: &str, name: &str) -> Result<T> {
        let (_obj, attr) = self.open_attr(object, name)?;
        let mut value = T::default();
        self.check(unsafe { ffi::H5Aread(attr.id, T::ELEM.mem_type(), (&mut value as *mut T).cast()) }, || {
            format!("cannot read attribute {name}")
        })?;
        Ok(value)
    }

    fn read_attr_str(&self, object: &str, name: &str) -> Result<String> {
        let (_obj, attr) = self.open_attr(object, name)?;
        let dtype = self.handle(unsafe { ffi::H5Aget_type(attr.id) }, ffi::H5Tclose, || "H5Aget_type failed".into())?;
        if unsafe { ffi::H5Tget_class(dtype.id) } != ffi::H5T_STRING {
            return Err(Error::Format(format!("attribute {name} is not a string")));
        }
        let size = unsafe { ffi::H5Tget_size(dtype.id) };
        let mut buf = vec![0u8; size];
        self.check(unsafe { ffi::H5Aread(attr.id, dtype.id, buf.as_mut_ptr().cast()) }, || {
            format!("cannot read attribute {name}")
        })?;
        let end = buf.iter().position(|&b| b == 0).unwrap_or(buf.len());
        buf.truncate(end);
        String::from_utf8(buf).map_err(|_| Error::Format(format!("attribute {name} is not UTF-8")))
    }
}

fn path_cstr(path: &Path) -> Result<CString> {
    let text = path
        .to_str()
        .ok_or_else(|| Error::invalid(format!("path {} is not valid UTF-8", path.display())))?;
    CString::new(text).map_err(|_| Error::invalid(format!("path {} contains a NUL byte", path.display())))
}

fn write_contents(file: &H5File, bundle: &DatasetBundle) -> Result<()> {
    let config = &bundle.config;
    file.write_attr_str("/", "version", FORMAT_VERSION)?;
    file.write_attr("/", "seed", config.seed)?;
    file.write_attr("/", "positivity_shift", bundle.positivity_shift)?;
    for (key, value) in config.key_values() {
        match value {
            ConfigValue::Int(v) => file.write_attr("/", key, v)?,
            ConfigValue::Float(v) => file.write_attr("/", key, v)?,
            ConfigValue::Text(v) => file.write_attr_str("/", key, &v)?,
        }
    }
    let json = serde_json::to_string(config).map_err(|e| Error::Internal(format!("config echo: {e}")))?;
    file.write_attr_str("/", "config_json", &json)?;

    let visible = bundle.visible.as_standard_layout();
    file.write_dataset("/features", &[visible.nrows(), visible.ncols()], visible.as_slice().expect("standard layout"))?;
    let labels: Vec<i64> = bundle.labels.iter().map(|&l| l as i64).collect();
    file.write_dataset("/labels", &[labels.len()], &labels)?;

    file.create_group("/hidden")?;
    if let Some(hidden) = &bundle.hidden {
        let hidden = hidden.as_standard_layout();
        file.write_dataset("/hidden/features", &[hidden.nrows(), hidden.ncols()], hidden.as_slice().expect("standard layout"))?;
    }
    file.write_dataset("/hidden/usefulness", &[bundle.usefulness.len()], &bundle.usefulness)?;
    let mask: Vec<u8> = bundle.true_mask.iter().map(|&t| t as u8).collect();
    file.write_dataset("/hidden/true_mask", &[mask.len()], &mask)?;

    file.create_group("/noise")?;
    file.write_dataset("/noise/alpha", &[bundle.alpha.len()], &bundle.alpha)?;

    let w = &bundle.weights;
    file.create_group("/weights")?;
    let offsets: Vec<u64> = w.row_offsets().iter().map(|&o| o as u64).collect();
    let indices: Vec<u64> = w.indices().iter().map(|&i| i as u64).collect();
    file.write_dataset("/weights/row_offsets", &[offsets.len()], &offsets)?;
    file.write_dataset("/weights/indices", &[indices.len()], &indices)?;
    file.write_dataset("/weights/values", &[w.values().len()], w.values())?;
    let (k_min, k_max) = w.support();
    file.write_attr("/weights", "n_transitional", w.n_transitional() as u64)?;
    file.write_attr("/weights", "k_min", k_min as u64)?;
    file.write_attr("/weights", "k_max", k_max as u64)?;
    Ok(())
}

/// Writes `bundle` to `path`, replacing any existing file. A failed write
/// leaves no file behind.
pub fn write_hdf5(bundle: &DatasetBundle, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    bundle.validate()?;
    let _guard = LOCK.lock().unwrap_or_else(|e| e.into_inner());
    init();
    let result = H5File::create(path).and_then(|file| write_contents(&file, bundle));
    if result.is_err() {
        clear_errors();
        let _ = std::fs::remove_file(path);
    }
    result
}

/// Drops recorded library errors; a stack left non-empty stalls shutdown.
fn clear_errors() {
    unsafe {
        ffi::H5Eclear2(ffi::H5E_DEFAULT);
    }
}

fn check_version(version: &str) -> Result<()> {
    let supported: u32 = FORMAT_VERSION.split('.').next().unwrap().parse().unwrap();
    let major: u32 = version
        .split('.')
        .next()
        .and_then(|m| m.parse().ok())
        .ok_or_else(|| Error::Format(format!("unreadable format version {version:?}")))?;
    if major > supported {
        return Err(Error::Format(format!(
            "file format version {version} is newer than the supported {FORMAT_VERSION}; upgrade to read it"
        )));
    }
    Ok(())
}

/// Reads a bundle written by [`write_hdf5`]. The hidden matrix is optional.
pub fn read_hdf5(path: impl AsRef<Path>) -> Result<DatasetBundle> {
    let path = path.as_ref();
    let _guard = LOCK.lock().unwrap_or_else(|e| e.into_inner());
    init();
    let result = read_contents(path);
    if result.is_err() {
        clear_errors();
    }
    result
}

fn read_contents(path: &Path) -> Result<DatasetBundle> {
    let file = H5File::open(path)?;
    check_version(&file.read_attr_str("/", "version")?)?;
    let config: GeneratorConfig = serde_json::from_str(&file.read_attr_str("/", "config_json")?)
        .map_err(|e| Error::Format(format!("config_json: {e}")))?;
    let positivity_shift: f64 = file.read_attr("/", "positivity_shift")?;

    let visible = file.read_matrix("/features")?;
    let labels = file
        .read_vector::<i64>("/labels")?
        .into_iter()
        .map(|l| u32::try_from(l).map_err(|_| Error::Format(format!("label {l} out of range"))))
        .collect::<Result<Vec<_>>>()?;
    let hidden = if file.exists("/hidden/features") { Some(file.read_matrix("/hidden/features")?) } else { None };
    let usefulness = file.read_vector::<f64>("/hidden/usefulness")?;
    let true_mask = file.read_vector::<u8>("/hidden/true_mask")?.into_iter().map(|b| b != 0).collect();
    let alpha = file.read_vector::<f64>("/noise/alpha")?;

    let to_usize = |v: Vec<u64>| v.into_iter().map(|x| x as usize).collect::<Vec<_>>();
    let offsets = to_usize(file.read_vector::<u64>("/weights/row_offsets")?);
    let indices = to_usize(file.read_vector::<u64>("/weights/indices")?);
    let values = file.read_vector::<f64>("/weights/values")?;
    let n_transitional = file.read_attr::<u64>("/weights", "n_transitional")? as usize;
    let k_min = file.read_attr::<u64>("/weights", "k_min")? as usize;
    let k_max = file.read_attr::<u64>("/weights", "k_max")? as usize;
    let weights = BlendWeights::from_csr(offsets, indices, values, n_transitional, k_min, k_max)?;

    let bundle = DatasetBundle { visible, labels, hidden, usefulness, true_mask, alpha, weights, config, positivity_shift };
    bundle.validate().map_err(|e| Error::Format(e.to_string()))?;
    Ok(bundle)
}

/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_get_groundstate_converged: (a: number) => number;
export const __wbg_get_groundstate_energy: (a: number) => number;
export const __wbg_get_groundstate_iterations: (a: number) => number;
export const __wbg_get_groundstate_omega: (a: number) => number;
export const __wbg_get_groundstate_residual: (a: number) => number;
export const __wbg_get_window_boundary: (a: number) => number;
export const __wbg_get_window_lower: (a: number) => number;
export const __wbg_get_window_nls_beta: (a: number) => number;
export const __wbg_get_window_nonempty: (a: number) => number;
export const __wbg_get_window_upper: (a: number) => number;
export const __wbg_groundstate_free: (a: number, b: number) => void;
export const __wbg_set_groundstate_converged: (a: number, b: number) => void;
export const __wbg_set_groundstate_energy: (a: number, b: number) => void;
export const __wbg_set_groundstate_iterations: (a: number, b: number) => void;
export const __wbg_set_groundstate_omega: (a: number, b: number) => void;
export const __wbg_set_groundstate_residual: (a: number, b: number) => void;
export const __wbg_set_window_boundary: (a: number, b: number) => void;
export const __wbg_set_window_lower: (a: number, b: number) => void;
export const __wbg_set_window_nls_beta: (a: number, b: number) => void;
export const __wbg_set_window_nonempty: (a: number, b: number) => void;
export const __wbg_set_window_upper: (a: number, b: number) => void;
export const __wbg_window_free: (a: number, b: number) => void;
export const beta_window: (a: number, b: number, c: number, d: number) => [number, number, number];
export const ground_state: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const groundstate_profile: (a: number) => [number, number];
export const groundstate_radius: (a: number) => [number, number];
export const kernel_curve: (a: number, b: number, c: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;

/* tslint:disable */
/* eslint-disable */

export class GroundState {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    converged: boolean;
    energy: number;
    iterations: number;
    omega: number;
    residual: number;
    /**
     * `u` at those distances.
     */
    readonly profile: Float64Array;
    /**
     * Distances from the centre along the first axis.
     */
    readonly radius: Float64Array;
}

export class Window {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Certified mass boundary for the unit Gaussian trial, `NaN` when `beta` is outside the window.
     */
    boundary: number;
    lower: number;
    nls_beta: number;
    nonempty: boolean;
    upper: number;
}

/**
 * Admissible `β` window at `p` for `regime` (`"small_rho"` or `"large_rho"`), with the trial
 * threshold at `beta`.
 */
export function beta_window(p: number, regime: string, beta: number): Window;

/**
 * Least-energy state at `(a, ρ, p)` on an `n³` grid of half-width `half_width`.
 */
export function ground_state(n: number, half_width: number, a: number, rho: number, p: number): GroundState;

/**
 * `κ_a(r)` at `samples` evenly spaced radii in `(0, r_max]`.
 */
export function kernel_curve(a: number, r_max: number, samples: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_get_groundstate_converged: (a: number) => number;
    readonly __wbg_get_groundstate_energy: (a: number) => number;
    readonly __wbg_get_groundstate_iterations: (a: number) => number;
    readonly __wbg_get_groundstate_omega: (a: number) => number;
    readonly __wbg_get_groundstate_residual: (a: number) => number;
    readonly __wbg_get_window_boundary: (a: number) => number;
    readonly __wbg_get_window_lower: (a: number) => number;
    readonly __wbg_get_window_nls_beta: (a: number) => number;
    readonly __wbg_get_window_nonempty: (a: number) => number;
    readonly __wbg_get_window_upper: (a: number) => number;
    readonly __wbg_groundstate_free: (a: number, b: number) => void;
    readonly __wbg_set_groundstate_converged: (a: number, b: number) => void;
    readonly __wbg_set_groundstate_energy: (a: number, b: number) => void;
    readonly __wbg_set_groundstate_iterations: (a: number, b: number) => void;
    readonly __wbg_set_groundstate_omega: (a: number, b: number) => void;
    readonly __wbg_set_groundstate_residual: (a: number, b: number) => void;
    readonly __wbg_set_window_boundary: (a: number, b: number) => void;
    readonly __wbg_set_window_lower: (a: number, b: number) => void;
    readonly __wbg_set_window_nls_beta: (a: number, b: number) => void;
    readonly __wbg_set_window_nonempty: (a: number, b: number) => void;
    readonly __wbg_set_window_upper: (a: number, b: number) => void;
    readonly __wbg_window_free: (a: number, b: number) => void;
    readonly beta_window: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly ground_state: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly groundstate_profile: (a: number) => [number, number];
    readonly groundstate_radius: (a: number) => [number, number];
    readonly kernel_curve: (a: number, b: number, c: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;

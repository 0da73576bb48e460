/* tslint:disable */
/* eslint-disable */

/**
 * Rows `|ρ|, |F|, |G|, Re F, Re G` for WKB then the same four for exact.
 */
export function curves(ell_re: number, ell_im: number, eta_re: number, eta_im: number, rho_min: number, rho_max: number, points: number, arg: number): Float64Array;

/**
 * Rows `|ρ|` and the relative WKB error of `F, F', G, G'`.
 */
export function errors(ell_re: number, ell_im: number, eta_re: number, eta_im: number, rho_min: number, rho_max: number, points: number, arg: number): Float64Array;

/**
 * Rows `x, Re φ, Im φ, Re φ', Im φ'` of the phase map along real `x`.
 */
export function phase_map(a_re: number, a_im: number, x_min: number, x_max: number, points: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly curves: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number];
    readonly errors: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number];
    readonly phase_map: (a: number, b: number, c: number, d: number, e: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
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

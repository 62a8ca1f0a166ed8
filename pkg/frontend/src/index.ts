export * from "./types.js";
export * from "./geometry.js";
export * from "./protocol.js";
export * from "./layers.js";
export * from "./session.js";
export * from "./scripted.js";
export { CliBackend } from "./cli_backend.js";

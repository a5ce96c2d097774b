/**
 * Wire protocol for the panel: typed views of the JSON text frames the
 * websocket bridge exchanges, plus the command constructors.
 *
 * Server to client: ModelDescription (once per connection), State (streamed
 * at the publish rate), Error (command rejected, connection kept).
 * Client to server: Command, either {joint, target} or {ik_target}.
 */

import { z } from "zod";

const vec3 = z.tuple([z.number(), z.number(), z.number()]);

const originSchema = z.object({
  xyz: vec3,
  rpy: vec3,
});

const revoluteJointSchema = z.object({
  name: z.string(),
  parent: z.string(),
  child: z.string(),
  axis: vec3,
  origin: originSchema,
  lower: z.number(),
  upper: z.number(),
});

const fixedJointSchema = z.object({
  name: z.string(),
  parent: z.string(),
  child: z.string(),
  origin: originSchema,
});

const geometrySchema = z.discriminatedUnion("type", [
  z.object({ type: z.literal("box"), size: vec3 }),
  z.object({ type: z.literal("cylinder"), radius: z.number(), length: z.number() }),
  z.object({ type: z.literal("mesh"), meshpath: z.string(), scale: vec3 }),
]);

const linkSchema = z.object({
  name: z.string(),
  geometry: geometrySchema,
  origin: originSchema,
});

const modelDescriptionSchema = z.object({
  kind: z.literal("ModelDescription"),
  namespace: z.string(),
  root: z.string(),
  tip: z.string(),
  joints: z.array(revoluteJointSchema),
  fixed: z.array(fixedJointSchema),
  links: z.array(linkSchema),
});

const stateSchema = z
  .object({
    kind: z.literal("State"),
    t: z.number(),
    names: z.array(z.string()),
    q: z.array(z.number()),
    qd: z.array(z.number()),
    effort: z.array(z.number()),
    target: z.array(z.number()),
    tip: vec3,
  })
  .refine(
    (s) =>
      s.q.length === s.names.length &&
      s.qd.length === s.names.length &&
      s.effort.length === s.names.length &&
      s.target.length === s.names.length,
    { message: "State arrays must match names in length" },
  );

const errorSchema = z.object({
  kind: z.literal("Error"),
  message: z.string(),
});

export type Vec3 = z.infer<typeof vec3>;
export type OriginDoc = z.infer<typeof originSchema>;
export type RevoluteJointDoc = z.infer<typeof revoluteJointSchema>;
export type FixedJointDoc = z.infer<typeof fixedJointSchema>;
export type GeometryDoc = z.infer<typeof geometrySchema>;
export type LinkDoc = z.infer<typeof linkSchema>;
export type ModelDescriptionFrame = z.infer<typeof modelDescriptionSchema>;
export type StateFrame = z.infer<typeof stateSchema>;
export type ErrorFrame = z.infer<typeof errorSchema>;
export type ServerFrame = ModelDescriptionFrame | StateFrame | ErrorFrame;

export class ProtocolError extends Error {}

/** Parse one inbound text frame; throws ProtocolError on anything malformed. */
export function parseServerFrame(raw: string): ServerFrame {
  let doc: unknown;
  try {
    doc = JSON.parse(raw);
  } catch (exc) {
    throw new ProtocolError(`bad JSON from server: ${(exc as Error).message}`);
  }
  if (typeof doc !== "object" || doc === null || Array.isArray(doc)) {
    throw new ProtocolError("server frame is not an object");
  }
  const kind = (doc as Record<string, unknown>)["kind"];
  const schema =
    kind === "ModelDescription"
      ? modelDescriptionSchema
      : kind === "State"
        ? stateSchema
        : kind === "Error"
          ? errorSchema
          : null;
  if (schema === null) {
    throw new ProtocolError(`unknown frame kind ${JSON.stringify(kind)}`);
  }
  const result = schema.safeParse(doc);
  if (!result.success) {
    const first = result.error.issues[0];
    const where = first && first.path.length > 0 ? ` at ${first.path.join(".")}` : "";
    throw new ProtocolError(`bad ${kind} frame${where}: ${first?.message ?? "invalid"}`);
  }
  return result.data;
}

/** Command frame steering one joint to an absolute angle (radians). */
export function jointCommand(joint: string, target: number): string {
  if (!Number.isFinite(target)) {
    throw new ProtocolError(`joint target must be finite, got ${target}`);
  }
  return JSON.stringify({ kind: "Command", joint, target });
}

/** Command frame asking the server to solve IK for a Cartesian tip target. */
export function ikCommand(x: number, y: number, z: number): string {
  if (![x, y, z].every(Number.isFinite)) {
    throw new ProtocolError(`ik target must be three finite numbers, got (${x}, ${y}, ${z})`);
  }
  return JSON.stringify({ kind: "Command", ik_target: [x, y, z] });
}

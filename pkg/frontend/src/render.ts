/**
 * three.js scene of the kinematic chain.
 *
 * Links with box or cylinder geometry are drawn as those primitives at
 * their visual origins; mesh links are drawn as their bounding segment
 * (the bone from their joint to the next joint origin). Revolute joints
 * get marker spheres. The world is z-up to match the simulator frames.
 */

import * as THREE from "three";
import { OrbitControls } from "three/addons/controls/OrbitControls.js";
import type { Pose } from "./fk";
import type { PanelModel } from "./model";
import type { OriginDoc, Vec3 } from "./protocol";

const LINK_COLOR = 0x5b8dbd;
const BONE_COLOR = 0x9aa5b1;
const JOINT_COLOR = 0xe8a33d;
const TIP_COLOR = 0x4ccf6a;
const IK_COLOR = 0xd956c8;
const BONE_RADIUS = 0.02;

function poseMatrix(pose: Pose): THREE.Matrix4 {
  const r = pose.r;
  return new THREE.Matrix4().set(
    r[0], r[1], r[2], pose.p[0],
    r[3], r[4], r[5], pose.p[1],
    r[6], r[7], r[8], pose.p[2],
    0, 0, 0, 1,
  );
}

function originMatrix(origin: OriginDoc): THREE.Matrix4 {
  const [roll, pitch, yaw] = origin.rpy;
  // fixed-axis rpy equals intrinsic yaw-pitch-roll, three's "ZYX"
  const m = new THREE.Matrix4().makeRotationFromEuler(
    new THREE.Euler(roll, pitch, yaw, "ZYX"),
  );
  m.setPosition(...origin.xyz);
  return m;
}

interface Bone {
  mesh: THREE.Mesh;
  fromLink: string;
  toLink: string;
}

export class ArmScene {
  private readonly renderer: THREE.WebGLRenderer;
  private readonly scene: THREE.Scene;
  private readonly camera: THREE.PerspectiveCamera;
  private readonly controls: OrbitControls;
  private readonly armGroup = new THREE.Group();
  private linkGroups = new Map<string, THREE.Group>();
  private bones: Bone[] = [];
  private jointMarkers: { mesh: THREE.Mesh; link: string }[] = [];
  private readonly tipMarker: THREE.Mesh;
  private readonly ikMarker: THREE.Mesh;
  private model: PanelModel | null = null;

  constructor(private readonly container: HTMLElement) {
    this.renderer = new THREE.WebGLRenderer({ antialias: true });
    this.renderer.setPixelRatio(globalThis.devicePixelRatio ?? 1);
    container.appendChild(this.renderer.domElement);

    this.scene = new THREE.Scene();
    this.scene.background = new THREE.Color(0x14181d);

    this.camera = new THREE.PerspectiveCamera(50, 1, 0.01, 100);
    this.camera.up.set(0, 0, 1);
    this.camera.position.set(1.5, -1.3, 1.0);

    this.controls = new OrbitControls(this.camera, this.renderer.domElement);
    this.controls.target.set(0.25, 0, 0.45);
    this.controls.enableDamping = true;

    const grid = new THREE.GridHelper(2, 20, 0x3a4148, 0x262c33);
    grid.rotateX(Math.PI / 2); // into the xy ground plane of a z-up world
    this.scene.add(grid);
    this.scene.add(new THREE.AxesHelper(0.3));
    this.scene.add(new THREE.HemisphereLight(0xdde3ea, 0x20262e, 1.1));
    const sun = new THREE.DirectionalLight(0xffffff, 1.4);
    sun.position.set(1.5, -2.0, 3.0);
    this.scene.add(sun);
    this.scene.add(this.armGroup);

    this.tipMarker = new THREE.Mesh(
      new THREE.SphereGeometry(0.022, 20, 16),
      new THREE.MeshStandardMaterial({ color: TIP_COLOR }),
    );
    this.ikMarker = new THREE.Mesh(
      new THREE.SphereGeometry(0.035, 16, 12),
      new THREE.MeshBasicMaterial({ color: IK_COLOR, wireframe: true }),
    );
    this.tipMarker.visible = false;
    this.ikMarker.visible = false;
    this.scene.add(this.tipMarker, this.ikMarker);

    this.resize();
    new ResizeObserver(() => this.resize()).observe(container);
  }

  private resize(): void {
    const w = Math.max(1, this.container.clientWidth);
    const h = Math.max(1, this.container.clientHeight);
    this.renderer.setSize(w, h);
    this.camera.aspect = w / h;
    this.camera.updateProjectionMatrix();
  }

  /** Rebuild the arm objects for a (re)received model description. */
  setModel(model: PanelModel): void {
    this.model = model;
    this.armGroup.clear();
    this.linkGroups = new Map();
    this.bones = [];
    this.jointMarkers = [];

    for (const link of model.links) {
      const group = new THREE.Group();
      group.matrixAutoUpdate = false;
      if (link.geometry.type !== "mesh") {
        let geometry: THREE.BufferGeometry;
        if (link.geometry.type === "box") {
          geometry = new THREE.BoxGeometry(...link.geometry.size);
        } else {
          geometry = new THREE.CylinderGeometry(
            link.geometry.radius, link.geometry.radius, link.geometry.length, 24,
          );
          geometry.rotateX(Math.PI / 2); // simulator cylinders run along z
        }
        const mesh = new THREE.Mesh(geometry, new THREE.MeshStandardMaterial({
          color: LINK_COLOR, roughness: 0.55, metalness: 0.1,
          transparent: true, opacity: 0.85,
        }));
        mesh.matrixAutoUpdate = false;
        mesh.matrix.copy(originMatrix(link.origin));
        group.add(mesh);
      }
      this.armGroup.add(group);
      this.linkGroups.set(link.name, group);
    }

    // bones between consecutive chain frames double as the bounding
    // segment for mesh links
    let fromLink = model.root;
    for (const step of model.chain) {
      const mesh = new THREE.Mesh(
        new THREE.CylinderGeometry(BONE_RADIUS, BONE_RADIUS, 1, 12),
        new THREE.MeshStandardMaterial({ color: BONE_COLOR, roughness: 0.7 }),
      );
      mesh.visible = false;
      this.armGroup.add(mesh);
      this.bones.push({ mesh, fromLink, toLink: step.child });
      if (step.axis !== null) {
        const marker = new THREE.Mesh(
          new THREE.SphereGeometry(0.03, 20, 16),
          new THREE.MeshStandardMaterial({ color: JOINT_COLOR }),
        );
        this.armGroup.add(marker);
        this.jointMarkers.push({ mesh: marker, link: step.child });
      }
      fromLink = step.child;
    }
    this.tipMarker.visible = true;
  }

  /** Re-pose every object from the joint angles of the latest state. */
  update(q: ReadonlyMap<string, number>, ikTarget: Vec3 | null): void {
    if (this.model === null) {
      return;
    }
    const poses = this.model.linkPoses(q);
    for (const [name, group] of this.linkGroups) {
      const pose = poses.get(name);
      if (pose !== undefined) {
        group.matrix.copy(poseMatrix(pose));
      }
    }
    const up = new THREE.Vector3(0, 1, 0);
    for (const bone of this.bones) {
      const a = poses.get(bone.fromLink);
      const b = poses.get(bone.toLink);
      if (a === undefined || b === undefined) {
        continue;
      }
      const pa = new THREE.Vector3(...a.p);
      const pb = new THREE.Vector3(...b.p);
      const length = pa.distanceTo(pb);
      if (length < 1e-6) {
        bone.mesh.visible = false;
        continue;
      }
      bone.mesh.visible = true;
      bone.mesh.position.copy(pa.clone().add(pb).multiplyScalar(0.5));
      bone.mesh.quaternion.setFromUnitVectors(up, pb.clone().sub(pa).normalize());
      bone.mesh.scale.set(1, length, 1);
    }
    for (const marker of this.jointMarkers) {
      const pose = poses.get(marker.link);
      if (pose !== undefined) {
        marker.mesh.position.set(...pose.p);
      }
    }
    const tip = poses.get(this.model.tip);
    if (tip !== undefined) {
      this.tipMarker.position.set(...tip.p);
    }
    this.ikMarker.visible = ikTarget !== null;
    if (ikTarget !== null) {
      this.ikMarker.position.set(...ikTarget);
    }
  }

  render(): void {
    this.controls.update();
    this.renderer.render(this.scene, this.camera);
  }
}

// three.js scene engine: orbitable, zoomable display of glTF/GLB evidence.

import * as THREE from "three";
import { OrbitControls } from "three/examples/jsm/controls/OrbitControls.js";
import { GLTFLoader } from "three/examples/jsm/loaders/GLTFLoader.js";

import { SceneEngine } from "./state.js";

export class ThreeSceneEngine implements SceneEngine {
  private readonly renderer: THREE.WebGLRenderer;
  private readonly scene: THREE.Scene;
  private readonly camera: THREE.PerspectiveCamera;
  private readonly controls: OrbitControls;
  private model: THREE.Object3D | null = null;

  constructor(private readonly container: HTMLElement) {
    const width = container.clientWidth || 640;
    const height = container.clientHeight || 480;
    this.renderer = new THREE.WebGLRenderer({ antialias: true });
    this.renderer.setSize(width, height);
    this.renderer.setPixelRatio(window.devicePixelRatio);
    container.appendChild(this.renderer.domElement);

    this.scene = new THREE.Scene();
    this.scene.background = new THREE.Color(0x10141c);
    this.scene.add(new THREE.AmbientLight(0xffffff, 0.7));
    const key = new THREE.DirectionalLight(0xffffff, 1.4);
    key.position.set(4, 8, 6);
    this.scene.add(key);
    this.scene.add(new THREE.GridHelper(10, 20, 0x2c3a50, 0x1c2634));

    this.camera = new THREE.PerspectiveCamera(50, width / height, 0.01, 1000);
    this.camera.position.set(2.5, 2, 3.5);

    this.controls = new OrbitControls(this.camera, this.renderer.domElement);
    this.controls.enableDamping = true;

    window.addEventListener("resize", () => this.resize());
    this.animate();
  }

  async display(bytes: ArrayBuffer, filename: string): Promise<void> {
    const gltf = await new Promise<{ scene: THREE.Object3D }>((resolve, reject) => {
      new GLTFLoader().parse(bytes, "", resolve, (error) =>
        reject(error instanceof Error ? error : new Error(`cannot parse ${filename}`)),
      );
    });
    this.clear();
    this.model = gltf.scene;
    this.frameModel(this.model);
    this.scene.add(this.model);
  }

  clear(): void {
    if (this.model) {
      this.scene.remove(this.model);
      this.model = null;
    }
  }

  // scale and center so any model lands inside the default orbit radius
  private frameModel(model: THREE.Object3D): void {
    const box = new THREE.Box3().setFromObject(model);
    const size = box.getSize(new THREE.Vector3());
    const center = box.getCenter(new THREE.Vector3());
    const largest = Math.max(size.x, size.y, size.z) || 1;
    const scale = 2.5 / largest;
    model.scale.setScalar(scale);
    model.position.copy(center.multiplyScalar(-scale));
    this.controls.target.set(0, 0, 0);
    this.controls.update();
  }

  private resize(): void {
    const width = this.container.clientWidth || 640;
    const height = this.container.clientHeight || 480;
    this.camera.aspect = width / height;
    this.camera.updateProjectionMatrix();
    this.renderer.setSize(width, height);
  }

  private animate = (): void => {
    requestAnimationFrame(this.animate);
    this.controls.update();
    this.renderer.render(this.scene, this.camera);
  };
}

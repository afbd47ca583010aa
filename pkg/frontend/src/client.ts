import type {
  AnnotationPayload,
  FramePayload,
  Progress,
  SaveResult,
  SwimmerClass,
  VideoInfo,
} from "./types.js";

/** The service operations the UI consumes; tests substitute stubs. */
export interface AnnotationApi {
  listVideos(): Promise<VideoInfo[]>;
  listClasses(): Promise<SwimmerClass[]>;
  getFrame(frameId: string): Promise<FramePayload>;
  imageUrl(frameId: string): string;
  putAnnotations(
    frameId: string,
    expectedVersion: number,
    annotations: AnnotationPayload[]
  ): Promise<SaveResult>;
  nextFrame(
    videoId: string,
    afterIndex: number | null
  ): Promise<{ frame_id: string; frame_index: number } | null>;
  legalNext(
    videoId: string,
    trackId: string,
    frameIndex: number
  ): Promise<SwimmerClass[]>;
  progress(): Promise<Progress>;
}

/**
 * Thin typed wrapper over the annotation service HTTP API. The service is
 * the single source of validation; this client only translates statuses
 * into discriminated results the UI can render.
 */
export class ApiClient implements AnnotationApi {
  constructor(
    private baseUrl = "",
    private fetchImpl: typeof fetch = globalThis.fetch.bind(globalThis)
  ) {}

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path);
    if (!response.ok) {
      throw new Error(`GET ${path} failed with ${response.status}`);
    }
    return (await response.json()) as T;
  }

  async listVideos(): Promise<VideoInfo[]> {
    const data = await this.getJson<{ videos: VideoInfo[] }>("/api/videos");
    return data.videos;
  }

  async listClasses(): Promise<SwimmerClass[]> {
    const data = await this.getJson<{ classes: SwimmerClass[] }>("/api/classes");
    return data.classes;
  }

  async getFrame(frameId: string): Promise<FramePayload> {
    const data = await this.getJson<{ frame: FramePayload }>(
      `/api/frames/${encodeURIComponent(frameId)}`
    );
    return data.frame;
  }

  imageUrl(frameId: string): string {
    return `${this.baseUrl}/api/frames/${encodeURIComponent(frameId)}/image`;
  }

  async putAnnotations(
    frameId: string,
    expectedVersion: number,
    annotations: AnnotationPayload[]
  ): Promise<SaveResult> {
    const response = await this.fetchImpl(
      `${this.baseUrl}/api/frames/${encodeURIComponent(frameId)}/annotations`,
      {
        method: "PUT",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ expected_version: expectedVersion, annotations }),
      }
    );
    if (response.status === 200) {
      const data = await response.json();
      return { ok: true, version: data.version };
    }
    if (response.status === 409) {
      const data = await response.json();
      return { ok: false, kind: "conflict", currentVersion: data.current_version };
    }
    if (response.status === 422) {
      const data = await response.json();
      return { ok: false, kind: "invalid", violations: data.violations };
    }
    throw new Error(`PUT annotations failed with ${response.status}`);
  }

  /** Next sampled frame after `afterIndex`, or null when the video is done. */
  async nextFrame(
    videoId: string,
    afterIndex: number | null
  ): Promise<{ frame_id: string; frame_index: number } | null> {
    const params = afterIndex === null ? "" : `?after_index=${afterIndex}`;
    const response = await this.fetchImpl(
      `${this.baseUrl}/api/videos/${encodeURIComponent(videoId)}/next_frame${params}`
    );
    if (response.status === 404) return null;
    if (!response.ok) {
      throw new Error(`next_frame failed with ${response.status}`);
    }
    return await response.json();
  }

  async legalNext(
    videoId: string,
    trackId: string,
    frameIndex: number
  ): Promise<SwimmerClass[]> {
    const data = await this.getJson<{ classes: SwimmerClass[] }>(
      `/api/videos/${encodeURIComponent(videoId)}/tracks/${encodeURIComponent(
        trackId
      )}/legal_next?frame_index=${frameIndex}`
    );
    return data.classes;
  }

  async progress(): Promise<Progress> {
    return await this.getJson<Progress>("/api/progress");
  }
}

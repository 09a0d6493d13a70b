import { ApiClient, apiBaseFromLocation } from './api.js';
import { GalleryView } from './gallery.js';
import { AuthoringView } from './authoring.js';

const CHART_ROUTE = /^#\/chart\/([^/]+)$/;

export function startApp(root: HTMLElement): void {
  const api = new ApiClient(apiBaseFromLocation(window.location, window.localStorage));

  const route = () => {
    const match = CHART_ROUTE.exec(window.location.hash);
    if (match) {
      const view = new AuthoringView(api, decodeURIComponent(match[1]));
      root.replaceChildren(view.root);
      void view.load();
    } else {
      const view = new GalleryView(api, (id) => {
        window.location.hash = `#/chart/${encodeURIComponent(id)}`;
      });
      root.replaceChildren(view.root);
      void view.load();
    }
  };

  window.addEventListener('hashchange', route);
  route();
}

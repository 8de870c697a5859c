import { ApiClient } from "./api.js";
import { renderApp } from "./render.js";
import { AppStore } from "./state.js";

const api = new ApiClient("");
const store = new AppStore(api);

function wireUpload(store: AppStore): void {
  const input = document.querySelector<HTMLInputElement>("#log-file")!;
  const format = document.querySelector<HTMLSelectElement>("#log-format")!;
  const button = document.querySelector<HTMLButtonElement>("#upload")!;
  button.addEventListener("click", () => {
    const file = input.files?.[0];
    if (!file) return;
    void store.uploadFile(file, file.name, format.value || undefined);
  });
}

const root = document.querySelector<HTMLElement>("#app")!;
store.subscribe((state) => renderApp(root, state, store));
wireUpload(store);
renderApp(root, store.getState(), store);

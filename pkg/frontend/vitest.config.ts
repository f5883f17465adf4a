import { defineConfig } from 'vitest/config';

// the workflow test talks to the spawned review service; giving the
// happy-dom document that origin mirrors production, where the UI is
// served by the service itself (same origin, no CORS involved)
export default defineConfig({
  test: {
    environmentOptions: {
      happyDOM: {
        url: 'http://127.0.0.1:8492',
      },
    },
  },
});

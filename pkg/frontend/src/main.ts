/**
 * Entry point: mount the review app on #app against the same origin.
 */

import { ReviewApi } from './api.js';
import { ReviewApp } from './ui.js';

const root = document.getElementById('app');
if (!root) {
  throw new Error('missing #app mount point');
}
const app = new ReviewApp(root, new ReviewApi(''));
void app.start();

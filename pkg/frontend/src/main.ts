import { RiskApi } from './api.js';
import { App } from './app.js';

// The API origin defaults to same-origin; override with ?api=http://host:port
// when the static files are served separately from the scoring service.
const params = new URLSearchParams(window.location.search);
const base = params.get('api') ?? '';

const root = document.getElementById('app');
if (!root) throw new Error('missing #app element');

void new App(root, new RiskApi(base)).start();

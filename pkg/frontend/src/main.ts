import './style.css';
import { ApiClient } from './api';
import { DashboardApp } from './app';

declare global {
  interface Window {
    RSMM_BASE_URL?: string;
  }
}

const baseUrl = window.RSMM_BASE_URL ?? 'http://127.0.0.1:8421';
const root = document.querySelector<HTMLDivElement>('#app');

if (root) {
  const app = new DashboardApp(root, new ApiClient(baseUrl));
  const requested = new URLSearchParams(window.location.search).get('assessment');
  void app.load(requested ?? 'default');
}

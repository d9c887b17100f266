import java.net.URL;

public class HttpBot {
    private String url;

    public HttpBot(String url) {
        this.url = url;
    }

    public HttpBot(URL url) {
        this.url = url.toExternalForm();
    }
}
